"""Monte Carlo symbol error rate with counter-based per-trial randomness."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..channel import ChannelParams, apply_channel, channel_from_uniforms
from ..constellation import Constellation
from ..decoder import coherent_min_distance_decode, two_step_decode_batch
from ..streams import SLOT_SYMBOL, trial_uniforms
from .config import ExperimentConfig

CHUNK = 1 << 16
Z95 = 1.959963984540054


@dataclass(frozen=True)
class SerEstimate:
    snr_db: float
    trials: int
    errors: int
    ser: float
    ci95_low: float
    ci95_high: float


def wilson_interval(errors: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    p = errors / trials
    z2n = z * z / trials
    center = (p + 0.5 * z2n) / (1 + z2n)
    half = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    return max(0.0, min(p, center - half)), min(1.0, max(p, center + half))


def count_errors(c: Constellation, params: ChannelParams, seed: int, start: int, stop: int,
                 receiver: str = "two-step", reestimate: bool = True) -> int:
    """Symbol errors over trial indices ``[start, stop)``."""
    idx = np.arange(start, stop, dtype=np.uint64)
    u = trial_uniforms(seed, idx)
    symbols = np.minimum((u[:, SLOT_SYMBOL] * c.m).astype(np.int64), c.m - 1)
    draws = channel_from_uniforms(u, params)
    y = apply_channel(c.values[symbols], draws, params)
    if receiver == "coherent":
        decoded = coherent_min_distance_decode(y, draws.h_hat, c, params)
    else:
        decoded = two_step_decode_batch(y, draws.h_hat, c, params, reestimate).point_index
    return int(np.count_nonzero(decoded != symbols))


def _count_chunk(job):
    return count_errors(*job)


def run_ser_point(config: ExperimentConfig, snr_db: float, trial_offset: int = 0,
                  workers: int = 1) -> SerEstimate:
    """SER at one SNR over trials ``trial_offset .. trial_offset + trials_per_point - 1``.

    Trials are cut into fixed chunks; each chunk is a pure function of its index
    range, so the error count does not depend on ``workers``.
    """
    c = config.constellation.build()
    params = ChannelParams.from_snr_db(snr_db, config.phase_bound)
    stop = trial_offset + config.trials_per_point
    jobs = [(c, params, config.seed, lo, min(lo + CHUNK, stop), config.receiver,
             config.decoder.reestimate) for lo in range(trial_offset, stop, CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(_count_chunk, jobs))
    else:
        errors = sum(map(_count_chunk, jobs))
    trials = config.trials_per_point
    low, high = wilson_interval(errors, trials)
    return SerEstimate(float(snr_db), trials, errors, errors / trials, low, high)


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[SerEstimate]:
    """One SER estimate per grid point; point j owns trials ``[j T, (j+1) T)``."""
    n = config.trials_per_point
    return [run_ser_point(config, snr, j * n, workers) for j, snr in enumerate(config.snr_db)]
