"""
Bit error rate, mean square error and convergence curves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MetricPoint:
    """One averaged point of a plotted curve."""

    x: float
    y: float
    series: str
    trials: int = 1


def ber(tx, rx) -> float:
    """Fraction of positions where the two bit streams differ."""
    tx = np.asarray(tx).ravel()
    rx = np.asarray(rx).ravel()
    if tx.size != rx.size:
        raise ValueError(f"bit stream length mismatch: {tx.size} vs {rx.size}")
    if tx.size == 0:
        raise ValueError("BER of empty bit streams is undefined")
    return float(np.count_nonzero(tx != rx)) / tx.size


def mse(noisy, filtered) -> float:
    """Mean of the squared difference between the noisy input and the filter output."""
    a = np.asarray(noisy, dtype=float)
    b = np.asarray(filtered, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("MSE of empty buffers is undefined")
    diff = a - b
    return float(np.mean(diff * diff))


def clean_mse(clean, filtered) -> float:
    """Diagnostic only: distance of the filter output from the transmitted signal."""
    return mse(clean, filtered)


def running_mse(e, window: int = 100) -> np.ndarray:
    """
    Trailing-window mean of ``e**2``.

    ``out[n]`` averages ``e[m]**2`` over ``max(0, n - window + 1) <= m <= n``,
    so the first ``window - 1`` outputs average over fewer samples.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    e2 = np.square(np.asarray(e, dtype=float))
    csum = np.concatenate([[0.0], np.cumsum(e2)])
    n = np.arange(e2.size)
    lo = np.maximum(0, n - window + 1)
    return (csum[n + 1] - csum[lo]) / (n + 1 - lo)


def iterations_to_floor(curve, rel_tol: float = 0.1) -> int:
    """
    First index from which ``curve`` stays within ``rel_tol`` of its final value.

    Returns 0 when the whole curve is already inside the band.
    """
    curve = np.asarray(curve, dtype=float)
    if curve.size == 0:
        raise ValueError("empty curve")
    final = curve[-1]
    outside = np.flatnonzero(np.abs(curve - final) > rel_tol * abs(final))
    return int(outside[-1] + 1) if outside.size else 0
