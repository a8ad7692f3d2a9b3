"""
Sample-by-sample LMS adaptation of the line enhancer taps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..ale import AleConfig, regressor_matrix
from ..metrics import running_mse
from .base import AdaptationResult, DivergenceError


@dataclass(frozen=True)
class LMSConfig:
    step_size: float = 0.01
    initial_weights: Optional[Tuple[float, ...]] = None
    history_every: int = 100
    history_window: int = 100

    def __post_init__(self):
        if not (math.isfinite(self.step_size) and self.step_size > 0):
            raise ValueError("step_size must be finite and > 0")
        if self.history_every < 1 or self.history_window < 1:
            raise ValueError("history_every and history_window must be >= 1")


def lms_run(d, lms: LMSConfig, cfg: AleConfig) -> AdaptationResult:
    """
    Run LMS over ``d`` once, updating ``W <- W + mu * e[n] * regressor[n]``
    after every sample.

    ``filtered`` and ``error`` are the online trajectories, i.e. ``y[n]`` is
    produced with the weights held before the update at ``n``.

    Raises
    ------
    DivergenceError
        as soon as a weight becomes non-finite
    """
    d = np.asarray(d, dtype=float)
    h = d.size
    if lms.initial_weights is None:
        w = np.zeros(cfg.order)
    else:
        w = np.array(lms.initial_weights, dtype=float)
        if w.shape != (cfg.order,):
            raise ValueError(f"initial_weights must have {cfg.order} entries")
    x = regressor_matrix(d, cfg)
    mu = lms.step_size
    y = np.empty(h)
    e = np.empty(h)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(h):
            r = x[n]
            y[n] = r @ w
            e[n] = d[n] - y[n]
            w = w + (mu * e[n]) * r
            if not np.isfinite(w).all():
                raise DivergenceError(n, f"LMS diverged at sample {n} (step_size={mu})")

    if h == 0:
        history = [(0, 0.0)]
    else:
        curve = running_mse(e, lms.history_window)
        idx = list(range(lms.history_every - 1, h, lms.history_every))
        if not idx or idx[-1] != h - 1:
            idx.append(h - 1)
        history = [(i, float(curve[i])) for i in idx]
    return AdaptationResult(
        final_weights=w,
        filtered=y,
        error=e,
        cost_history=history,
        evaluations=h,
    )
