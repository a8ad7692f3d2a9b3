"""
Bit generation and real passband M-PSK modulation.

Only binary PSK is supported: bit ``b`` maps to carrier phase ``b * pi``.
The carrier is expressed in cycles per sample; ``nominal_rf_hz`` is carried
along for reporting and never enters the arithmetic.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModemConfig:
    psk_order: int = 2
    samples_per_symbol: int = 20
    carrier_freq: float = 0.25
    amplitude: float = 1.0
    nominal_rf_hz: float = 2.4e9

    def __post_init__(self):
        m = self.psk_order
        if m < 2 or m & (m - 1):
            raise ValueError(f"psk_order must be a power of two >= 2, got {m}")
        if m != 2:
            raise ValueError(f"only psk_order=2 (BPSK) is implemented, got {m}")
        if self.samples_per_symbol < 2:
            raise ValueError("samples_per_symbol must be >= 2")
        if not 0.0 < self.carrier_freq < 0.5:
            raise ValueError("carrier_freq must lie in (0, 0.5) cycles/sample")
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")
        if self.nominal_rf_hz < 0:
            raise ValueError("nominal_rf_hz must be non-negative")


def generate_bits(n_bits: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n_bits`` equiprobable bits as a uint8 array."""
    if n_bits < 0:
        raise ValueError("n_bits must be non-negative")
    return rng.integers(0, 2, size=n_bits, dtype=np.uint8)


def _carrier(n_samples: int, cfg: ModemConfig) -> np.ndarray:
    n = np.arange(n_samples)
    return np.cos(2.0 * np.pi * cfg.carrier_freq * n)


def modulate(bits, cfg: ModemConfig) -> np.ndarray:
    """
    Modulate a bit stream onto a phase-continuous real carrier.

    Sample ``n`` (global index) of the symbol carrying bit ``b`` is
    ``A * cos(2 pi f_c n + b pi)``.

    Parameters
    ----------
    bits: array_like of int
        symbols in ``[0, psk_order)``
    cfg: ModemConfig

    Returns
    -------
    numpy.ndarray
        ``len(bits) * samples_per_symbol`` real samples
    """
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size and (bits.min() < 0 or bits.max() >= cfg.psk_order):
        raise ValueError(f"symbols must lie in [0, {cfg.psk_order})")
    phase = np.repeat(bits, cfg.samples_per_symbol) * np.pi
    n = np.arange(phase.size)
    return cfg.amplitude * np.cos(2.0 * np.pi * cfg.carrier_freq * n + phase)


def demodulate(samples, cfg: ModemConfig) -> np.ndarray:
    """
    Coherent correlation demodulator.

    Each symbol is correlated with the reference carrier; a positive
    correlation decodes as 0, a negative one as 1 and an exact tie as 0.
    A trailing partial symbol is dropped with a warning.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    sps = cfg.samples_per_symbol
    n_sym, rem = divmod(samples.size, sps)
    if rem:
        logger.warning("discarding %d trailing samples (partial symbol)", rem)
    whole = samples[: n_sym * sps]
    corr = (whole * _carrier(whole.size, cfg)).reshape(n_sym, sps).sum(axis=1)
    return (corr < 0).astype(np.uint8)
