"""
Binary-coded genetic algorithm over the line enhancer taps.

A chromosome is a flat ``uint8`` array of ``order * bits_per_weight`` genes;
each tap is an unsigned, most-significant-bit-first integer mapped linearly
onto ``weight_range``. Each generation is evaluated, the lowest-cost
fraction ``parent_fraction`` is kept unchanged, and the rest of the
population is refilled with children of roulette-selected elite parents
(single-point crossover, then bit-flip mutation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..ale import AleConfig
from .base import AdaptationResult, BlockCost, block_result

SELECTION_EPS = 1e-12


@dataclass(frozen=True)
class GAConfig:
    population: int = 110
    generations: int = 300
    bits_per_weight: int = 16
    weight_range: Tuple[float, float] = (-2.0, 2.0)
    crossover_prob: float = 1.0
    mutation_prob: float = 0.1
    parent_fraction: float = 0.5
    tol: Optional[float] = None

    def __post_init__(self):
        if self.population < 4:
            raise ValueError(f"population must be >= 4, got {self.population}")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 2 <= self.bits_per_weight <= 62:
            raise ValueError("bits_per_weight must lie in [2, 62]")
        lo, hi = self.weight_range
        if not lo < hi:
            raise ValueError("weight_range must satisfy w_min < w_max")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0.0 < self.parent_fraction <= 1.0:
            raise ValueError("parent_fraction must lie in (0, 1]")

    @property
    def n_parents(self) -> int:
        return math.ceil(self.parent_fraction * self.population)


def _gene_values(bits: np.ndarray, n_bits: int) -> np.ndarray:
    place = 1 << np.arange(n_bits - 1, -1, -1, dtype=np.int64)
    return bits.astype(np.int64) @ place


def decode_population(pop, ga: GAConfig, order: int) -> np.ndarray:
    """Decode a ``(P, order * B)`` bit array into ``(P, order)`` weights."""
    pop = np.asarray(pop)
    b = ga.bits_per_weight
    if pop.shape[-1] != order * b:
        raise ValueError(f"chromosome length {pop.shape[-1]} != {order} taps x {b} bits")
    genes = pop.reshape(pop.shape[:-1] + (order, b))
    lo, hi = ga.weight_range
    return lo + _gene_values(genes, b) / float((1 << b) - 1) * (hi - lo)


def decode_chromosome(bits, ga: GAConfig, order: Optional[int] = None) -> np.ndarray:
    """
    Map a chromosome to its weight vector.

    ``order`` defaults to ``len(bits) // bits_per_weight``; when given, the
    length is checked against it.
    """
    bits = np.asarray(bits)
    if order is None:
        order, rem = divmod(bits.size, ga.bits_per_weight)
        if rem or order == 0:
            raise ValueError(f"chromosome length {bits.size} is not a multiple of {ga.bits_per_weight}")
    return decode_population(bits, ga, order)


def encode_weights(w, ga: GAConfig) -> np.ndarray:
    """Nearest chromosome to ``w`` (clipped to ``weight_range``)."""
    b = ga.bits_per_weight
    lo, hi = ga.weight_range
    top = (1 << b) - 1
    w = np.clip(np.asarray(w, dtype=float), lo, hi)
    ints = np.rint((w - lo) / (hi - lo) * top).astype(np.int64)
    shifts = np.arange(b - 1, -1, -1, dtype=np.int64)
    return ((ints[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def roulette_select(costs, rng: np.random.Generator) -> int:
    """
    Draw an index with probability proportional to ``1 / (cost + eps)``.

    Lower cost means a larger slice of the wheel.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.size == 0:
        raise ValueError("cannot select from an empty population")
    if not np.all(np.isfinite(costs)) or np.any(costs < 0):
        raise ValueError("costs must be finite and non-negative")
    wheel = np.cumsum(1.0 / (costs + SELECTION_EPS))
    if not wheel[-1] > 0:
        raise ValueError("all selection weights are zero")
    idx = int(np.searchsorted(wheel, rng.random() * wheel[-1], side="right"))
    return min(idx, costs.size - 1)


def crossover(a, b, crossover_prob: float, rng: np.random.Generator, cut: Optional[int] = None):
    """
    Single-point crossover.

    With probability ``crossover_prob`` a cut point is drawn uniformly from
    ``[1, len - 1]`` (or taken from ``cut``) and the tails are swapped;
    otherwise copies of the parents are returned.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"parent length mismatch: {a.shape} vs {b.shape}")
    n = a.size
    if n < 2 or rng.random() >= crossover_prob:
        return a.copy(), b.copy()
    if cut is None:
        cut = int(rng.integers(1, n))
    elif not 1 <= cut <= n - 1:
        raise ValueError(f"cut must lie in [1, {n - 1}]")
    c1 = np.concatenate([a[:cut], b[cut:]])
    c2 = np.concatenate([b[:cut], a[cut:]])
    return c1, c2


def mutate(bits, mutation_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Flip every gene independently with probability ``mutation_prob``."""
    bits = np.asarray(bits)
    flip = rng.random(bits.shape) < mutation_prob
    return np.where(flip, 1 - bits, bits).astype(bits.dtype)


def ga_run(d, ga: GAConfig, cfg: AleConfig, rng: np.random.Generator) -> AdaptationResult:
    """
    Minimise the block MSE of the line enhancer with the genetic algorithm.

    Every generation, including the elites carried over from the previous
    one, is evaluated in full, so ``evaluations == population * generations``.
    ``cost_history`` holds the best cost found so far after each generation.
    """
    cost = BlockCost(d, cfg)
    pop_size = ga.population
    n_parents = ga.n_parents
    n_children = pop_size - n_parents
    length = cfg.order * ga.bits_per_weight

    pop = rng.integers(0, 2, size=(pop_size, length), dtype=np.uint8)
    best_bits = pop[0]
    best_cost = math.inf
    history = []
    for gen in range(ga.generations):
        costs = cost(decode_population(pop, ga, cfg.order))
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best_bits = pop[i].copy()
        history.append((gen, best_cost))
        if gen == ga.generations - 1 or (ga.tol is not None and best_cost < ga.tol):
            break

        ranked = np.argsort(costs, kind="stable")[:n_parents]
        parents = pop[ranked]
        parent_costs = costs[ranked]
        children = []
        while len(children) < n_children:
            p1 = parents[roulette_select(parent_costs, rng)]
            p2 = parents[roulette_select(parent_costs, rng)]
            c1, c2 = crossover(p1, p2, ga.crossover_prob, rng)
            children.append(mutate(c1, ga.mutation_prob, rng))
            if len(children) < n_children:
                children.append(mutate(c2, ga.mutation_prob, rng))
        pop = np.vstack([parents] + children) if children else parents

    w = decode_chromosome(best_bits, ga, cfg.order)
    return block_result(d, w, cfg, history, cost.evaluations)
