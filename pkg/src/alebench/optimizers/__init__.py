"""Weight-search strategies for the line enhancer: LMS, GA and PSO."""
from .base import AdaptationResult, BlockCost, DivergenceError, mse_cost
from .ga import (
    GAConfig,
    crossover,
    decode_chromosome,
    decode_population,
    encode_weights,
    ga_run,
    mutate,
    roulette_select,
)
from .lms import LMSConfig, lms_run
from .oracle import wiener_oracle
from .pso import Particle, PSOConfig, pso_position_update, pso_run, pso_velocity_update

__all__ = [
    "AdaptationResult",
    "BlockCost",
    "DivergenceError",
    "GAConfig",
    "LMSConfig",
    "PSOConfig",
    "Particle",
    "crossover",
    "decode_chromosome",
    "decode_population",
    "encode_weights",
    "ga_run",
    "lms_run",
    "mse_cost",
    "mutate",
    "pso_position_update",
    "pso_run",
    "pso_velocity_update",
    "roulette_select",
    "wiener_oracle",
]
