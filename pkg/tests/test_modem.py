import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alebench.channel import NoiseSpec, add_awgn
from alebench.modem import ModemConfig, demodulate, generate_bits, modulate

QUARTER = ModemConfig(samples_per_symbol=4, carrier_freq=0.25, amplitude=1.0)


def test_generate_bits_empty():
    assert generate_bits(0, np.random.default_rng(1)).size == 0


def test_generate_bits_balanced():
    bits = generate_bits(10**6, np.random.default_rng(42))
    assert set(np.unique(bits)) <= {0, 1}
    # binomial 3-sigma half-width is 0.0015; the documented band is wider
    assert 0.497 <= bits.mean() <= 0.503


def test_generate_bits_deterministic():
    a = generate_bits(8, np.random.default_rng(5))
    b = generate_bits(8, np.random.default_rng(5))
    np.testing.assert_array_equal(a, b)


def test_generate_bits_rejects_negative():
    with pytest.raises(ValueError):
        generate_bits(-1, np.random.default_rng(0))


@pytest.mark.parametrize(
    "bits, expected",
    [
        ([0], [1, 0, -1, 0]),
        ([1], [-1, 0, 1, 0]),
        ([0, 1], [1, 0, -1, 0, -1, 0, 1, 0]),
    ],
)
def test_modulate_quarter_cycle(bits, expected):
    np.testing.assert_allclose(modulate(bits, QUARTER), expected, atol=1e-12)


def test_modulate_rejects_symbols_out_of_alphabet():
    with pytest.raises(ValueError):
        modulate([0, 2], QUARTER)


@pytest.mark.parametrize("kwargs", [dict(psk_order=4), dict(psk_order=3), dict(samples_per_symbol=1), dict(carrier_freq=0.5), dict(amplitude=0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ModemConfig(**kwargs)


def test_demodulate_all_zero_ties_to_zero():
    np.testing.assert_array_equal(demodulate(np.zeros(4), QUARTER), [0])


def test_demodulate_drops_partial_symbol(caplog):
    x = modulate([1, 0, 1], QUARTER)
    with caplog.at_level("WARNING"):
        out = demodulate(x[:-2], QUARTER)
    np.testing.assert_array_equal(out, [1, 0])
    assert "partial symbol" in caplog.text


def test_awgn_at_20db_is_error_free():
    cfg = ModemConfig(samples_per_symbol=10)
    rng = np.random.default_rng(3)
    bits = generate_bits(1000, rng)
    rx = demodulate(add_awgn(modulate(bits, cfg), 20.0, rng), cfg)
    assert np.count_nonzero(rx != bits) == 0


@settings(max_examples=200, deadline=None)
@given(
    bits=st.lists(st.integers(0, 1), max_size=64),
    sps=st.integers(2, 32),
    fc=st.floats(0.02, 0.48),
    amp=st.floats(0.1, 10.0),
)
def test_round_trip(bits, sps, fc, amp):
    cfg = ModemConfig(samples_per_symbol=sps, carrier_freq=fc, amplitude=amp)
    x = modulate(bits, cfg)
    assert x.size == len(bits) * sps
    np.testing.assert_array_equal(demodulate(x, cfg), bits)


@settings(max_examples=50, deadline=None)
@given(bits=st.lists(st.integers(0, 1), min_size=1, max_size=64), k=st.integers(1, 8), amp=st.floats(0.1, 5.0))
def test_power_is_half_amplitude_squared(bits, k, amp):
    cfg = ModemConfig(samples_per_symbol=4 * k, carrier_freq=0.25, amplitude=amp)
    x = modulate(bits, cfg)
    assert abs(np.mean(x**2) - amp**2 / 2) < 1e-9
