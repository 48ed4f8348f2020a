"""Angle-then-amplitude decoding under phase-estimate error.

Step 1 picks the subset (ray) whose innermost point maximizes the real inner
product ``Re(y * conj(h_hat * x))``; step 2 picks the point on that ray closest
to ``y`` after the known power scaling. All functions accept scalars or
equal-length 1-D arrays; ties go to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelParams
from .constellation import Constellation, Family
from .errors import PskPamError


@dataclass(frozen=True)
class DecodeOutcome:
    subset_index: int
    amplitude_index: int
    point_index: int
    reestimated: bool


class DecodeBatch(NamedTuple):
    subset_index: np.ndarray
    amplitude_index: np.ndarray
    point_index: np.ndarray
    reestimated: np.ndarray

    def outcome(self, t: int) -> DecodeOutcome:
        return DecodeOutcome(int(self.subset_index[t]), int(self.amplitude_index[t]),
                             int(self.point_index[t]), bool(self.reestimated[t]))


def _columns(*values):
    arrays = [np.atleast_1d(np.asarray(v, dtype=complex)) for v in values]
    return np.broadcast_arrays(*arrays)


def _require_rays(c: Constellation) -> None:
    if c.family not in (Family.PSK_PAM, Family.PSK):
        raise PskPamError(f"two-step decoding needs a PSK-PAM or PSK constellation, got {c.family.value}",
                          code="UNSUPPORTED_FAMILY")


def angle_metric(y, h_hat, x):
    """Real inner product of ``y`` and ``h_hat * x`` as 2-vectors."""
    return np.real(np.asarray(y) * np.conj(np.asarray(h_hat) * np.asarray(x)))


def phase_condition_holds(phase_bound_a: float, n_per_subset: int) -> bool:
    """Whether ``cos(a) >= (2N - 1) / (2N)``, under which step 2 errs like plain PAM."""
    return math.cos(phase_bound_a) >= (2 * n_per_subset - 1) / (2 * n_per_subset)


def _decode_subset(y, h_hat, c):
    metrics = angle_metric(y[:, None], h_hat[:, None], c.inner_points[None, :])
    return np.argmax(metrics, axis=1) + 1


def decode_subset(y, h_hat, c: Constellation):
    _require_rays(c)
    scalar = np.ndim(y) == 0 and np.ndim(h_hat) == 0
    y, h_hat = _columns(y, h_hat)
    d = _decode_subset(y, h_hat, c)
    return int(d[0]) if scalar else d


def decode_subset_by_angle(y, h_hat, c: Constellation):
    """Nearest ray angle to ``angle(y) - angle(h_hat)``; equals decode_subset off ties."""
    _require_rays(c)
    scalar = np.ndim(y) == 0 and np.ndim(h_hat) == 0
    y, h_hat = _columns(y, h_hat)
    rel = np.mod(np.angle(y) - np.angle(h_hat), 2 * np.pi)
    d = np.mod(np.rint(rel / c.delta).astype(np.int64), c.k_subsets) + 1
    return int(d[0]) if scalar else d


def _decode_point(y, h_hat, c, d, power_p):
    candidates = c.values[c.subset_table[d - 1]]
    dist = np.abs(y[:, None] - math.sqrt(power_p) * h_hat[:, None] * candidates)
    return np.argmin(dist, axis=1) + 1


def decode_point(y, h_hat, c: Constellation, d, power_p: float = 1.0):
    """Amplitude index on ray ``d`` nearest to ``y`` in Euclidean distance."""
    scalar = np.ndim(y) == 0 and np.ndim(h_hat) == 0 and np.ndim(d) == 0
    y, h_hat = _columns(y, h_hat)
    d = np.broadcast_to(np.atleast_1d(np.asarray(d, dtype=np.int64)), y.shape)
    n = _decode_point(y, h_hat, c, d, power_p)
    return int(n[0]) if scalar else n


def reestimate_channel(y, h_hat, x_inner):
    """Channel estimate whose phase is taken from ``y / x_inner``.

    The magnitude of ``h_hat`` is kept: it is known exactly, while ``|y / x_inner|``
    is off by the unknown amplitude index and the power scaling.
    """
    y = np.asarray(y, dtype=complex)
    return np.abs(h_hat) * np.exp(1j * np.angle(y * np.conj(x_inner)))


def two_step_decode_batch(y, h_hat, c: Constellation, params: ChannelParams,
                          allow_reestimate: bool = True) -> DecodeBatch:
    _require_rays(c)
    y, h_hat = _columns(y, h_hat)
    d = _decode_subset(y, h_hat, c)
    redo = allow_reestimate and not phase_condition_holds(params.phase_bound_a, c.n_per_subset)
    if redo:
        h_hat = reestimate_channel(y, h_hat, c.inner_points[d - 1])
    n = _decode_point(y, h_hat, c, d, params.power_p)
    point = c.subset_table[d - 1, n - 1]
    return DecodeBatch(d, n, point, np.full(d.shape, redo))


def two_step_decode(y, h_hat, c: Constellation, params: ChannelParams,
                    allow_reestimate: bool = True) -> DecodeOutcome:
    return two_step_decode_batch(y, h_hat, c, params, allow_reestimate).outcome(0)


def coherent_min_distance_decode(y, h_hat, c: Constellation, params: ChannelParams):
    """Index of the point minimizing ``|y - sqrt(P) h_hat x|`` over the whole constellation."""
    scalar = np.ndim(y) == 0 and np.ndim(h_hat) == 0
    y, h_hat = _columns(y, h_hat)
    dist = np.abs(y[:, None] - math.sqrt(params.power_p) * h_hat[:, None] * c.values[None, :])
    idx = np.argmin(dist, axis=1)
    return int(idx[0]) if scalar else idx

