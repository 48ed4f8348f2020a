"""Counter-based random streams keyed by (master seed, trial index).

Every trial owns a fixed set of uniform "slots" generated by Philox4x32-10
with key = master seed and counter = (trial lo, trial hi, block, 0). Nothing
depends on how trials are batched or which worker evaluates them, so results
are reproducible under any partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GENERATOR_ID = "philox4x32-10/53bit-slots"

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)

# slot layout per trial: h.re, h.im, w.re, w.im, phi, symbol
N_SLOTS = 6
SLOT_H_RE, SLOT_H_IM, SLOT_W_RE, SLOT_W_IM, SLOT_PHI, SLOT_SYMBOL = range(N_SLOTS)


def philox4x32(counter, key) -> np.ndarray:
    """Philox4x32 with 10 rounds, vectorized over the leading axis.

    ``counter`` is (..., 4) and ``key`` is (..., 2), both of 32-bit words held
    in any integer dtype. Returns (..., 4) uint64 arrays of 32-bit words.
    """
    ctr = np.asarray(counter, dtype=np.uint64) & _MASK32
    c0, c1, c2, c3 = (ctr[..., j].copy() for j in range(4))
    k = np.asarray(key, dtype=np.uint64) & _MASK32
    k0 = np.broadcast_to(k[..., 0], c0.shape).astype(np.uint64)
    k1 = np.broadcast_to(k[..., 1], c0.shape).astype(np.uint64)
    for rnd in range(10):
        if rnd:
            k0 = (k0 + np.uint64(_W0)) & _MASK32
            k1 = (k1 + np.uint64(_W1)) & _MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT32) ^ c1 ^ k0,
            p1 & _MASK32,
            (p0 >> _SHIFT32) ^ c3 ^ k1,
            p0 & _MASK32,
        )
    return np.stack([c0, c1, c2, c3], axis=-1)


def trial_uniforms(seed: int, trial_indices) -> np.ndarray:
    """Open-interval (0, 1) uniforms of 53-bit resolution, shape (T, N_SLOTS)."""
    idx = np.atleast_1d(np.asarray(trial_indices, dtype=np.uint64))
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    key = np.array([seed & 0xFFFFFFFF, seed >> 32], dtype=np.uint64)
    n_blocks = (N_SLOTS + 1) // 2
    ctr = np.zeros((idx.size, n_blocks, 4), dtype=np.uint64)
    ctr[..., 0] = (idx & _MASK32)[:, None]
    ctr[..., 1] = (idx >> _SHIFT32)[:, None]
    ctr[..., 2] = np.arange(n_blocks, dtype=np.uint64)[None, :]
    words = philox4x32(ctr, key).reshape(idx.size, 2 * n_blocks, 2)
    hi = (words[..., 0] >> np.uint64(5)).astype(np.float64)
    lo = (words[..., 1] >> np.uint64(6)).astype(np.float64)
    u = (hi * 67108864.0 + lo + 0.5) * (1.0 / 9007199254740992.0)
    return u[:, :N_SLOTS]


@dataclass(frozen=True)
class TrialStream:
    """Handle naming the random stream of one trial."""

    seed: int
    trial_index: int

    def uniforms(self) -> np.ndarray:
        return trial_uniforms(self.seed, [self.trial_index])[0]


def stream(master_seed: int, trial_index: int) -> TrialStream:
    return TrialStream(int(master_seed), int(trial_index))
