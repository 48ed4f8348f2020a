import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pskpam.constellation import (Family, NormMode, build, build_psk, build_psk_pam, build_qam,
                                  mean_power, ring_radius)
from pskpam.errors import ConstellationError


def divisor_pairs():
    return st.integers(1, 64).flatmap(
        lambda m: st.sampled_from([k for k in range(1, m + 1) if m % k == 0]).map(lambda k: (m, k)))


@given(divisor_pairs(), st.sampled_from(list(NormMode)))
def test_normalization(mk, norm):
    m, k = mk
    c = build_psk_pam(m, k, norm)
    total = float(np.sum(np.abs(c.values) ** 2))
    target = 1.0 if norm is NormMode.PAPER_SUM else m
    assert total == pytest.approx(target, abs=1e-12 * m)


def test_radius_examples():
    # N=4: 6 / (5 * 9) under mean power; divide by M=8 for paper-sum
    assert ring_radius(8, 2) == pytest.approx(math.sqrt(6 / 45), abs=1e-15)
    assert ring_radius(8, 2, NormMode.PAPER_SUM) == pytest.approx(math.sqrt(6 / 360), abs=1e-15)
    assert ring_radius(8, 4, NormMode.PAPER_SUM) == pytest.approx(0.223606797749979, abs=1e-15)
    assert build_psk(8, NormMode.PAPER_SUM).radius_r == pytest.approx(math.sqrt(1 / 8), abs=1e-15)


def test_geometry_of_rays():
    c = build_psk_pam(16, 4)
    for p in c.points:
        assert abs(p.value) == pytest.approx(p.amplitude_index * c.radius_r, abs=1e-14)
        alpha = 2 * math.pi * (p.subset_index - 1) / 4
        assert math.remainder(math.atan2(p.value.imag, p.value.real) - alpha, 2 * math.pi) == \
            pytest.approx(0.0, abs=1e-12)
    assert c.subset_table.shape == (4, 4)
    assert c.index_of(3, 2) == c.subset_table[2, 1]
    assert c.points[c.index_of(3, 2)].subset_index == 3
    assert c.delta == pytest.approx(math.pi / 2)
    assert c.label == "(4,4)"


def test_psk_is_one_ring_psk_pam():
    a, b = build_psk(8), build_psk_pam(8, 8)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.family is Family.PSK and a.n_per_subset == 1


def test_arrays_are_read_only():
    c = build_psk_pam(8, 4)
    with pytest.raises(ValueError):
        c.values[0] = 0


@pytest.mark.parametrize("m, scale", [(4, 1 / math.sqrt(2)), (8, 1 / math.sqrt(6)), (16, 1 / math.sqrt(10))])
def test_qam_scale_and_power(m, scale):
    c = build_qam(m)
    assert c.radius_r == pytest.approx(scale, abs=1e-15)
    assert mean_power(c) == pytest.approx(1.0, abs=1e-12)
    assert len(set(c.values.tolist())) == m


def test_qam8_is_rectangular():
    c = build_qam(8)
    assert sorted({round(v.real / c.radius_r) for v in c.values}) == [-3, -1, 1, 3]
    assert sorted({round(v.imag / c.radius_r) for v in c.values}) == [-1, 1]


@pytest.mark.parametrize("call, code", [
    (lambda: build_psk_pam(0, 1), "ZERO"),
    (lambda: build_psk_pam(8, 3), "NON_DIVISOR"),
    (lambda: build_psk_pam(8, 0), "NON_DIVISOR"),
    (lambda: build_qam(32), "UNSUPPORTED_M"),
    (lambda: build_psk(1), "ZERO"),
    (lambda: build("psk-pam", 8), "NON_DIVISOR"),
])
def test_errors(call, code):
    with pytest.raises(ConstellationError) as info:
        call()
    assert info.value.code == code


@pytest.mark.parametrize("k", [4, 8, 16])
def test_rays_have_exact_quarter_turn_symmetry(k):
    inner = build_psk_pam(2 * k, k).inner_points
    for d in range(k):
        assert inner[d] * 1j == inner[(d + k // 4) % k]
