"""PSK-PAM (concentric ring), QAM and PSK constellations.

A PSK-PAM constellation with M = K * N points puts N equally spaced points on
each of K rays. The ray angles are ``alpha_k = 2*pi*(k-1)/K`` and the point
``x_ik`` on ray k has magnitude ``i * R``, so the innermost ring sits at R and
neighbouring points on a ray are R apart.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConstellationError


class Family(str, enum.Enum):
    PSK_PAM = "psk-pam"
    QAM = "qam"
    PSK = "psk"


class NormMode(str, enum.Enum):
    MEAN_POWER = "mean"
    PAPER_SUM = "paper-sum"


@dataclass(frozen=True)
class ConstellationPoint:
    value: complex
    subset_index: int
    amplitude_index: int


@dataclass(frozen=True)
class Constellation:
    """Immutable point set with a (K, N) grid structure.

    For QAM the grid is rows x columns of the rectangular lattice: ``subset_index``
    counts rows from the most negative imaginary level and ``amplitude_index``
    counts columns from the most negative real level. ``radius_r`` is then the
    lattice half-spacing (the scale applied to the odd-integer coordinates).
    """

    family: Family
    m: int
    k_subsets: int
    n_per_subset: int
    radius_r: float
    norm_mode: NormMode
    points: tuple[ConstellationPoint, ...]

    @cached_property
    def values(self) -> np.ndarray:
        v = np.array([p.value for p in self.points], dtype=complex)
        v.flags.writeable = False
        return v

    @cached_property
    def subset_indices(self) -> np.ndarray:
        v = np.array([p.subset_index for p in self.points], dtype=np.int64)
        v.flags.writeable = False
        return v

    @cached_property
    def amplitude_indices(self) -> np.ndarray:
        v = np.array([p.amplitude_index for p in self.points], dtype=np.int64)
        v.flags.writeable = False
        return v

    @cached_property
    def subset_table(self) -> np.ndarray:
        """(K, N) array of point indices; row k-1 lists subset k by amplitude."""
        table = np.empty((self.k_subsets, self.n_per_subset), dtype=np.int64)
        table[self.subset_indices - 1, self.amplitude_indices - 1] = np.arange(self.m)
        table.flags.writeable = False
        return table

    @cached_property
    def subset_angles(self) -> np.ndarray:
        v = 2.0 * np.pi * np.arange(self.k_subsets) / self.k_subsets
        v.flags.writeable = False
        return v

    @property
    def inner_points(self) -> np.ndarray:
        """The reduced constellation C*: the innermost point of every subset."""
        return self.values[self.subset_table[:, 0]]

    @property
    def delta(self) -> float:
        """Angular separation between consecutive subsets."""
        return 2.0 * math.pi / self.k_subsets

    @property
    def label(self) -> str:
        if self.family is Family.QAM:
            return f"{self.m}-QAM"
        return f"({self.k_subsets},{self.n_per_subset})"

    def index_of(self, subset_index: int, amplitude_index: int) -> int:
        return int(self.subset_table[subset_index - 1, amplitude_index - 1])


def ring_radius(m: int, k_subsets: int, norm_mode: NormMode = NormMode.MEAN_POWER) -> float:
    """Ring spacing R for a PSK-PAM constellation.

    PAPER_SUM makes the total power sum to one,
    ``R = sqrt(6 / (M (M/K + 1) (2M/K + 1)))``. MEAN_POWER drops the factor M so
    the average power is one.
    """
    n = m // k_subsets
    base = 6.0 / ((n + 1) * (2 * n + 1))
    if NormMode(norm_mode) is NormMode.PAPER_SUM:
        base /= m
    return math.sqrt(base)


def _ray_unit(j: int, k_subsets: int) -> complex:
    """``exp(2 pi i j / K)`` with exact quarter-turn symmetry, so ties stay exact."""
    quarter, rem = divmod(4 * j, k_subsets)
    if 2 * rem == k_subsets:
        unit = complex(math.sqrt(0.5), math.sqrt(0.5))
    else:
        angle = 0.5 * math.pi * rem / k_subsets
        unit = complex(math.cos(angle), math.sin(angle))
    return unit * (1, 1j, -1, -1j)[quarter % 4]


def _check_m(m: int) -> None:
    if m <= 0:
        raise ConstellationError(f"m must be positive, got {m}", code="ZERO")


def build_psk_pam(m: int, k_subsets: int, norm_mode: NormMode = NormMode.MEAN_POWER,
                  family: Family = Family.PSK_PAM) -> Constellation:
    _check_m(m)
    if k_subsets <= 0 or m % k_subsets:
        raise ConstellationError(f"k={k_subsets} does not divide m={m}", code="NON_DIVISOR")
    norm_mode = NormMode(norm_mode)
    n = m // k_subsets
    r = ring_radius(m, k_subsets, norm_mode)
    points = []
    for k in range(1, k_subsets + 1):
        unit = _ray_unit(k - 1, k_subsets)
        for i in range(1, n + 1):
            points.append(ConstellationPoint(i * r * unit, k, i))
    return Constellation(family, m, k_subsets, n, r, norm_mode, tuple(points))


def build_psk(m: int, norm_mode: NormMode = NormMode.MEAN_POWER) -> Constellation:
    if m < 2:
        raise ConstellationError(f"PSK needs m >= 2, got {m}", code="ZERO")
    return build_psk_pam(m, m, norm_mode, family=Family.PSK)


# rows x columns of odd-integer levels; 8-QAM is the 4x2 rectangle
_QAM_GRIDS = {4: (2, 2), 8: (2, 4), 16: (4, 4), 64: (8, 8)}


def build_qam(m: int, norm_mode: NormMode = NormMode.MEAN_POWER) -> Constellation:
    if m not in _QAM_GRIDS:
        raise ConstellationError(
            f"QAM supports m in {sorted(_QAM_GRIDS)}, got {m}", code="UNSUPPORTED_M")
    norm_mode = NormMode(norm_mode)
    rows, cols = _QAM_GRIDS[m]
    re_levels = 2 * np.arange(cols) - (cols - 1)
    im_levels = 2 * np.arange(rows) - (rows - 1)
    mean_sq = np.mean(re_levels ** 2) + np.mean(im_levels ** 2)
    total = mean_sq * (m if norm_mode is NormMode.PAPER_SUM else 1)
    scale = 1.0 / math.sqrt(total)
    points = tuple(
        ConstellationPoint(complex(scale * re, scale * im), row + 1, col + 1)
        for row, im in enumerate(im_levels)
        for col, re in enumerate(re_levels)
    )
    return Constellation(Family.QAM, m, rows, cols, scale, norm_mode, points)


def build(family: Family | str, m: int, k_subsets: int | None = None,
          norm_mode: NormMode | str = NormMode.MEAN_POWER) -> Constellation:
    """Dispatch on family; ``k_subsets`` is only read for PSK-PAM."""
    family = Family(family)
    norm_mode = NormMode(norm_mode)
    if family is Family.QAM:
        return build_qam(m, norm_mode)
    if family is Family.PSK:
        return build_psk(m, norm_mode)
    if k_subsets is None:
        raise ConstellationError("psk-pam needs k_subsets", code="NON_DIVISOR")
    return build_psk_pam(m, k_subsets, norm_mode)


def mean_power(c: Constellation) -> float:
    if not c.points:
        return 0.0
    return float(np.mean(np.abs(c.values) ** 2))
