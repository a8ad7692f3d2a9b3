"""
Channel impairments: AWGN at a target SNR and a "random nonlinear" noise
made of a memoryless cubic distortion plus a few low-frequency interference
tones (self-interference from a co-located transmitter).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class NoiseSpec:
    """
    Parameters of the noise channel.

    ``snr_db`` may be ``math.inf`` to disable AWGN. The nonlinear part is
    only applied when ``nonlinear_enabled`` is set.
    """

    snr_db: float = 0.0
    nonlinear_enabled: bool = False
    cubic_gain: float = 0.1
    tone_count: int = 2
    tone_amp_range: Tuple[float, float] = (0.5, 1.0)
    tone_freq_range: Tuple[float, float] = (0.01, 0.1)

    def __post_init__(self):
        lo, hi = self.tone_freq_range
        if not 0.0 < lo <= hi < 0.5:
            raise ValueError("tone_freq_range must be an ordered subrange of (0, 0.5)")
        a_lo, a_hi = self.tone_amp_range
        if not 0.0 <= a_lo <= a_hi:
            raise ValueError("tone_amp_range must be non-negative and ordered")
        if self.tone_count < 0:
            raise ValueError("tone_count must be >= 0")
        if not math.isfinite(self.cubic_gain):
            raise ValueError("cubic_gain must be finite")
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")


@dataclass(frozen=True)
class Tone:
    amplitude: float
    freq: float
    phase: float


def measure_power(signal) -> float:
    signal = np.asarray(signal, dtype=float)
    if signal.size == 0:
        raise ValueError("cannot measure the power of an empty buffer")
    return float(np.mean(signal * signal))


def noise_variance(signal_power: float, snr_db: float) -> float:
    return signal_power / 10.0 ** (snr_db / 10.0)


def add_awgn(signal, snr_db: float, rng: np.random.Generator, reference_power=None):
    """
    Add white Gaussian noise so that ``reference_power / noise_power`` equals
    ``snr_db``.

    The reference defaults to the power of ``signal`` itself. Pass the clean
    signal power explicitly when ``signal`` already carries other distortion.
    """
    signal = np.asarray(signal, dtype=float)
    if math.isinf(snr_db) and snr_db > 0:
        return signal.copy()
    power = measure_power(signal) if reference_power is None else float(reference_power)
    if not power > 0:
        raise ValueError("AWGN at a given SNR needs a reference power > 0")
    sigma = math.sqrt(noise_variance(power, snr_db))
    return signal + sigma * rng.standard_normal(signal.size)


def draw_tones(spec: NoiseSpec, rng: np.random.Generator) -> list[Tone]:
    k = spec.tone_count
    amps = rng.uniform(*spec.tone_amp_range, size=k)
    freqs = rng.uniform(*spec.tone_freq_range, size=k)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
    return [Tone(float(a), float(f), float(p)) for a, f, p in zip(amps, freqs, phases)]


def apply_nonlinearity(signal, cubic_gain: float, tones) -> np.ndarray:
    """``x + cubic_gain * x**3`` plus the given sinusoidal tones."""
    x = np.asarray(signal, dtype=float)
    out = x + cubic_gain * x**3
    n = np.arange(x.size)
    for t in tones:
        out = out + t.amplitude * np.sin(2.0 * np.pi * t.freq * n + t.phase)
    return out


def add_nonlinear_noise(signal, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """Cubic distortion plus ``spec.tone_count`` random tones, drawn once per call."""
    return apply_nonlinearity(signal, spec.cubic_gain, draw_tones(spec, rng))


def corrupt(signal, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    """
    Full channel: optional nonlinear noise, then AWGN referenced to the
    clean signal power.
    """
    clean_power = measure_power(signal)
    out = np.asarray(signal, dtype=float)
    if spec.nonlinear_enabled:
        out = add_nonlinear_noise(out, spec, rng)
    return add_awgn(out, spec.snr_db, rng, reference_power=clean_power)
