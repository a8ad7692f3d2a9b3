"""
Adaptive line enhancer data path.

The filter sees a delayed copy of the received samples, ``d[n - delay]``,
through an FIR of ``order`` taps, and its output is compared with ``d[n]``.
History before the first sample reads as zero, so every output has the same
length as its input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


@dataclass(frozen=True)
class AleConfig:
    order: int = 5
    delay: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.delay < 1:
            raise ValueError("delay must be >= 1")


def _padded(d: np.ndarray, cfg: AleConfig) -> np.ndarray:
    return np.concatenate([np.zeros(cfg.delay + cfg.order - 1), d])


def regressor_at(d, n: int, cfg: AleConfig) -> np.ndarray:
    """Return ``[d[n-delay], d[n-delay-1], ..., d[n-delay-order+1]]``."""
    d = np.asarray(d, dtype=float)
    if not 0 <= n < d.size:
        raise IndexError(f"sample index {n} outside buffer of length {d.size}")
    out = np.zeros(cfg.order)
    for j in range(cfg.order):
        m = n - cfg.delay - j
        if m >= 0:
            out[j] = d[m]
    return out


def regressor_matrix(d, cfg: AleConfig) -> np.ndarray:
    """
    Stack every regressor into an ``(H, order)`` array.

    Row ``n`` equals ``regressor_at(d, n, cfg)``. The result is a read-only
    strided view; copy it before writing.
    """
    d = np.asarray(d, dtype=float)
    padded = _padded(d, cfg)
    # windows[i] = padded[i : i + order]; row n needs padded[n : n + order]
    # reversed, since padded index n + order - 1 holds d[n - delay].
    windows = sliding_window_view(padded, cfg.order)[: d.size]
    return windows[:, ::-1]


def _check_weights(w, cfg: AleConfig) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (cfg.order,):
        raise ValueError(f"expected {cfg.order} weights, got shape {w.shape}")
    return w


def filter_output(d, w, cfg: AleConfig) -> np.ndarray:
    """``y[n] = regressor_at(d, n) . w`` for every ``n``."""
    w = _check_weights(w, cfg)
    return regressor_matrix(d, cfg) @ w


def error_signal(d, y) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    y = np.asarray(y, dtype=float)
    if d.shape != y.shape:
        raise ValueError(f"length mismatch: {d.shape} vs {y.shape}")
    return d - y
