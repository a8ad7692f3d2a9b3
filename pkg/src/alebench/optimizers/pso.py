"""
Global-best particle swarm over the line enhancer taps.

Velocities start at zero, are updated as
``omega * v + c1 * r1 * (pbest - w) + c2 * r2 * (gbest - w)`` with fresh
uniform ``r1, r2`` per dimension, and are clamped to ``[-v_max, v_max]``.
Positions are never clamped. The defaults are the Clerc-Kennedy
constriction values; ``inertia=1, c1=c2=2`` gives the classic update without
inertia damping, where the velocity clamp is what keeps the swarm bounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..ale import AleConfig
from .base import AdaptationResult, BlockCost, block_result


@dataclass(frozen=True)
class PSOConfig:
    particles: int = 60
    iterations: int = 200
    c1: float = 1.49618
    c2: float = 1.49618
    inertia: float = 0.7298
    v_max: float = 0.5
    init_range: Tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self):
        if self.particles < 2:
            raise ValueError(f"particles must be >= 2, got {self.particles}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("c1 and c2 must be >= 0")
        if not self.v_max > 0:
            raise ValueError("v_max must be > 0")
        lo, hi = self.init_range
        if not lo < hi:
            raise ValueError("init_range must be ordered")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_cost: float


def _velocity_step(v, w, pbest, gbest, pso: PSOConfig, r1, r2):
    v = pso.inertia * v + pso.c1 * r1 * (pbest - w) + pso.c2 * r2 * (gbest - w)
    return np.clip(v, -pso.v_max, pso.v_max)


def pso_velocity_update(p: Particle, gbest, pso: PSOConfig, rng: np.random.Generator, r1=None, r2=None):
    """
    New velocity of one particle.

    ``r1`` and ``r2`` are drawn uniformly from ``[0, 1)`` per dimension unless
    supplied.
    """
    w = np.asarray(p.position, dtype=float)
    gbest = np.asarray(gbest, dtype=float)
    if not (w.shape == gbest.shape == np.shape(p.velocity) == np.shape(p.best_position)):
        raise ValueError("particle and global best dimensions differ")
    if r1 is None:
        r1 = rng.random(w.shape)
    if r2 is None:
        r2 = rng.random(w.shape)
    return _velocity_step(np.asarray(p.velocity, dtype=float), w, p.best_position, gbest, pso, r1, r2)


def pso_position_update(p: Particle, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != np.shape(p.position):
        raise ValueError("velocity and position dimensions differ")
    return np.asarray(p.position, dtype=float) + v


def pso_run(d, pso: PSOConfig, cfg: AleConfig, rng: np.random.Generator) -> AdaptationResult:
    """
    Minimise the block MSE of the line enhancer with a synchronous swarm.

    All particles move using the global best of the previous iteration; the
    global best is refreshed once every particle has been re-evaluated.
    ``cost_history`` records the global best cost at the initial evaluation
    (index 0) and after each iteration.
    """
    cost = BlockCost(d, cfg)
    n, dim = pso.particles, cfg.order
    pos = rng.uniform(*pso.init_range, size=(n, dim))
    vel = np.zeros((n, dim))
    pbest = pos.copy()
    pbest_cost = cost(pos)
    g = int(np.argmin(pbest_cost))
    gbest, gbest_cost = pbest[g].copy(), float(pbest_cost[g])
    history = [(0, gbest_cost)]

    for k in range(1, pso.iterations + 1):
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        vel = _velocity_step(vel, pos, pbest, gbest, pso, r1, r2)
        pos = pos + vel
        c = cost(pos)
        improved = c < pbest_cost
        pbest[improved] = pos[improved]
        pbest_cost[improved] = c[improved]
        g = int(np.argmin(pbest_cost))
        if pbest_cost[g] < gbest_cost:
            gbest, gbest_cost = pbest[g].copy(), float(pbest_cost[g])
        history.append((k, gbest_cost))

    return block_result(d, gbest, cfg, history, cost.evaluations)
