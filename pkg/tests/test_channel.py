import math

import numpy as np
import pytest
from scipy import stats

from pskpam.channel import (ChannelParams, apply_channel, draw_channel, draw_channels, estimate_channel,
                            snr_db_to_power, wrap_angle)
from pskpam.streams import philox4x32, stream, trial_uniforms


@pytest.mark.parametrize("ctr, key, expected", [
    ([0, 0, 0, 0], [0, 0], [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]),
    ([0xFFFFFFFF] * 4, [0xFFFFFFFF] * 2, [0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD]),
    ([0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344], [0xA4093822, 0x299F31D0],
     [0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1]),
])
def test_philox_known_answers(ctr, key, expected):
    assert philox4x32(np.array([ctr]), np.array(key))[0].tolist() == expected


def test_uniforms_independent_of_batching():
    whole = trial_uniforms(11, np.arange(1000))
    parts = np.vstack([trial_uniforms(11, np.arange(lo, lo + 250)) for lo in range(0, 1000, 250)])
    np.testing.assert_array_equal(whole, parts)
    np.testing.assert_array_equal(stream(11, 437).uniforms(), whole[437])
    assert np.all((whole > 0) & (whole < 1))
    assert not np.array_equal(whole, trial_uniforms(12, np.arange(1000)))


def test_snr_conversion():
    assert snr_db_to_power(20) == pytest.approx(100.0)
    assert ChannelParams.from_snr_db(10, 0.1).power_p == pytest.approx(10.0)


@pytest.mark.parametrize("p, a", [(-1, 0.1), (math.inf, 0.1), (1, -0.1), (1, 4.0), (math.nan, 0.1)])
def test_param_validation(p, a):
    with pytest.raises(ValueError):
        ChannelParams(p, a)


def test_zero_power_passes_only_noise():
    params = ChannelParams(0.0, 0.3)
    d = draw_channel(params, stream(2, 9))
    assert apply_channel(0.7, d, params) == d.w


def test_zero_phase_bound_gives_exact_estimate():
    b = draw_channels(ChannelParams(10, 0.0), 3, np.arange(1000))
    assert np.all(b.phi == 0)
    np.testing.assert_array_equal(b.h_hat, b.h)


def test_estimate_keeps_magnitude():
    h = np.array([1 + 1j, -2j, 0.3])
    phi = np.array([0.2, -0.4, 0.1])
    est = estimate_channel(h, phi)
    np.testing.assert_allclose(np.abs(est), np.abs(h), rtol=1e-15)
    np.testing.assert_allclose(wrap_angle(np.angle(est) - np.angle(h)), phi, atol=1e-15)


def test_fading_and_noise_statistics():
    a = math.pi / 8
    b = draw_channels(ChannelParams(1.0, a), 5, np.arange(1_000_000))
    assert np.mean(np.abs(b.h) ** 2) == pytest.approx(1.0, abs=0.01)
    assert np.mean(np.abs(b.w) ** 2) == pytest.approx(1.0, abs=0.01)
    se = a / math.sqrt(3) / math.sqrt(len(b.phi))
    assert abs(np.mean(b.phi)) < 3 * se
    assert stats.kstest(b.phi[:100_000], "uniform", args=(-a, 2 * a)).pvalue > 1e-3
    assert stats.kstest(np.abs(b.h[:100_000]) ** 2, "expon").pvalue > 1e-3


def test_apply_channel_example():
    params = ChannelParams(4.0, 0.0)
    d = draw_channel(params, stream(1, 0))
    assert apply_channel(1j, d, params) == pytest.approx(2 * d.h * 1j + d.w)


def test_wrap_angle_range():
    x = np.array([math.pi, -math.pi, 3 * math.pi, 0.5])
    np.testing.assert_allclose(wrap_angle(x), [math.pi, math.pi, math.pi, 0.5])
