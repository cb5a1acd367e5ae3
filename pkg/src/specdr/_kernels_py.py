"""Pure numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` operation for operation so both produce the same
values for the same inputs (up to libm rounding in ``log``/``cos``/``sin``).
"""
import numpy as np

NAME = "python"

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_PI = 6.283185307179586
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64(seed, count):
    """First ``count`` outputs of the SplitMix64 generator started at ``seed``."""
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + i * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def gaussian_fill(count, seed):
    """``count`` standard normal draws, Box-Muller on SplitMix64 pairs."""
    npairs = (count + 1) // 2
    bits = splitmix64(seed, 2 * npairs) >> np.uint64(11)
    u1 = (bits[0::2].astype(np.float64) + 1.0) * _INV_2_53  # (0, 1]
    u2 = bits[1::2].astype(np.float64) * _INV_2_53  # [0, 1)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = _TWO_PI * u2
    out = np.empty(2 * npairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def pairwise_sq_dists(X, block=256):
    """Squared Euclidean distances between rows, by explicit differences."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    out = np.empty((n, n))
    for start in range(0, n, block):
        stop = min(start + block, n)
        diff = X[start:stop, None, :] - X[None, :, :]
        out[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def double_center_sq(D):
    """Gram matrix from a distance matrix: -1/2 of the doubly centered squares."""
    D = np.asarray(D, dtype=np.float64)
    sq = D * D
    row = sq.mean(axis=1)
    total = row.mean()
    return -0.5 * (sq - row[:, None] - row[None, :] + total)
