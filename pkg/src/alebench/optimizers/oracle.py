"""Closed-form least-squares taps, used as an independent reference."""
from __future__ import annotations

import numpy as np

from ..ale import AleConfig, regressor_matrix

RIDGE = 1e-9


def wiener_oracle(d, cfg: AleConfig, ridge: float = RIDGE) -> np.ndarray:
    """
    Solve the normal equations ``(R + ridge * s * I) w = X'd/H`` for the taps
    that minimise the block MSE of ``d``, where ``R = X'X/H`` and ``s`` is the
    mean diagonal of ``R`` (1 for an all-zero buffer), so the ridge is
    relative to the signal scale.
    """
    d = np.asarray(d, dtype=float)
    if d.size <= cfg.order:
        raise ValueError(f"need more than {cfg.order} samples, got {d.size}")
    x = regressor_matrix(d, cfg)
    r = x.T @ x / d.size
    scale = np.trace(r) / cfg.order
    r = r + ridge * (scale if scale > 0 else 1.0) * np.eye(cfg.order)
    p = x.T @ d / d.size
    w = np.linalg.solve(r, p)
    if not np.all(np.isfinite(w)):
        raise np.linalg.LinAlgError("normal equations are singular even with the ridge term")
    return w
