"""
Shared pieces of the weight-search strategies: the block MSE cost and the
result container every strategy returns.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ale import AleConfig, error_signal, filter_output, regressor_matrix


class DivergenceError(RuntimeError):
    """Raised when an adaptive update produces non-finite weights."""

    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"weights diverged at iteration {iteration}")


@dataclass
class AdaptationResult:
    final_weights: np.ndarray
    filtered: np.ndarray
    error: np.ndarray
    cost_history: list = field(default_factory=list)
    evaluations: int = 0

    @property
    def final_cost(self) -> float:
        return self.cost_history[-1][1]


def mse_cost(d, w, cfg: AleConfig) -> float:
    """Block cost ``mean((d - y)**2)`` of a fixed weight vector over the whole buffer."""
    d = np.asarray(d, dtype=float)
    if d.size == 0:
        raise ValueError("cost of an empty buffer is undefined")
    e = error_signal(d, filter_output(d, w, cfg))
    return float(np.mean(e * e))


class BlockCost:
    """
    Batched evaluator of :func:`mse_cost` for a fixed buffer.

    The regressor matrix is built once; each call filters the whole buffer
    for every candidate row of ``weights`` and counts one evaluation per row.
    """

    chunk = 16

    def __init__(self, d, cfg: AleConfig):
        self.d = np.asarray(d, dtype=float)
        if self.d.size == 0:
            raise ValueError("cost of an empty buffer is undefined")
        self.cfg = cfg
        self._xt = np.ascontiguousarray(regressor_matrix(self.d, cfg).T)
        # reused scratch rows keep the per-call cost free of large allocations
        self._buf = np.empty((self.chunk, self.d.size))
        self.evaluations = 0

    def __call__(self, weights) -> np.ndarray:
        weights = np.atleast_2d(np.asarray(weights, dtype=float))
        if weights.ndim != 2 or weights.shape[1] != self.cfg.order:
            raise ValueError(f"expected rows of {self.cfg.order} weights, got shape {weights.shape}")
        out = np.empty(weights.shape[0])
        for i in range(0, weights.shape[0], self.chunk):
            rows = weights[i : i + self.chunk]
            e = self._buf[: rows.shape[0]]
            np.matmul(rows, self._xt, out=e)
            np.subtract(self.d, e, out=e)
            out[i : i + rows.shape[0]] = np.einsum("ij,ij->i", e, e)
        self.evaluations += weights.shape[0]
        return out / self.d.size


def block_result(d, w, cfg: AleConfig, history, evaluations) -> AdaptationResult:
    w = np.asarray(w, dtype=float).copy()
    y = filter_output(d, w, cfg)
    return AdaptationResult(
        final_weights=w,
        filtered=y,
        error=error_signal(d, y),
        cost_history=list(history),
        evaluations=int(evaluations),
    )
