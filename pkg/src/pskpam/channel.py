"""Rayleigh fading with AWGN and a bounded, uniform phase-estimate error.

Received signal ``y = sqrt(P) h x + w`` with ``h, w ~ CN(0, 1)`` (each real
dimension has variance 1/2). The receiver knows ``|h|`` exactly but its phase
estimate is off by ``phi ~ U[-a, a]``: ``h_hat = |h| exp(j(theta + phi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import PskPamError
from .streams import (SLOT_H_IM, SLOT_H_RE, SLOT_PHI, SLOT_W_IM, SLOT_W_RE,
                      TrialStream, trial_uniforms)

_HALF_SQRT = math.sqrt(0.5)


@dataclass(frozen=True)
class ChannelParams:
    power_p: float
    phase_bound_a: float

    def __post_init__(self):
        if not math.isfinite(self.power_p) or self.power_p < 0:
            raise PskPamError(f"power_p must be finite and >= 0, got {self.power_p}",
                              code="INVALID_POWER")
        if not 0.0 <= self.phase_bound_a <= math.pi:
            raise PskPamError(f"phase_bound_a must lie in [0, pi], got {self.phase_bound_a}",
                              code="INVALID_PHASE_BOUND")

    @classmethod
    def from_snr_db(cls, snr_db: float, phase_bound_a: float) -> "ChannelParams":
        return cls(snr_db_to_power(snr_db), phase_bound_a)


def snr_db_to_power(snr_db: float) -> float:
    """SNR_dB = 10 log10(P) for unit mean-power constellations and unit noise."""
    return 10.0 ** (snr_db / 10.0)


def wrap_angle(x):
    """Map angles into (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return y if y.ndim else float(y)


@dataclass(frozen=True)
class ChannelDraw:
    h: complex
    theta: float
    phi: float
    w: complex
    h_hat: complex


@dataclass(frozen=True)
class ChannelBatch:
    """Columnar ChannelDraw for many trials."""

    h: np.ndarray
    phi: np.ndarray
    w: np.ndarray
    h_hat: np.ndarray

    @property
    def theta(self) -> np.ndarray:
        return np.angle(self.h)

    def __len__(self):
        return self.h.size

    def draw(self, t: int) -> ChannelDraw:
        return ChannelDraw(complex(self.h[t]), float(np.angle(self.h[t])), float(self.phi[t]),
                           complex(self.w[t]), complex(self.h_hat[t]))


def channel_from_uniforms(u: np.ndarray, params: ChannelParams) -> ChannelBatch:
    """Map (T, slots) uniforms to channel realizations by inverse-CDF sampling."""
    g = ndtri(u[:, [SLOT_H_RE, SLOT_H_IM, SLOT_W_RE, SLOT_W_IM]]) * _HALF_SQRT
    h = g[:, 0] + 1j * g[:, 1]
    w = g[:, 2] + 1j * g[:, 3]
    a = params.phase_bound_a
    phi = a * (2.0 * u[:, SLOT_PHI] - 1.0) if a > 0 else np.zeros(len(u))
    return ChannelBatch(h, phi, w, estimate_channel(h, phi))


def estimate_channel(h, phi):
    """h_hat with the exact magnitude of h and its phase rotated by phi."""
    rotated = np.abs(h) * np.exp(1j * (np.angle(h) + phi))
    return np.where(np.asarray(phi) == 0, h, rotated)


def draw_channels(params: ChannelParams, seed: int, trial_indices) -> ChannelBatch:
    return channel_from_uniforms(trial_uniforms(seed, trial_indices), params)


def draw_channel(params: ChannelParams, stream: TrialStream) -> ChannelDraw:
    return draw_channels(params, stream.seed, [stream.trial_index]).draw(0)


def apply_channel(x, draw, params: ChannelParams):
    """``sqrt(P) h x + w``; ``draw`` may be a ChannelDraw or a ChannelBatch."""
    return math.sqrt(params.power_p) * draw.h * x + draw.w
