"""Deterministic 64-bit pseudorandomness: SplitMix64 streams and seed splitting.

The generator is pinned by name and constants so that independent
implementations reproduce partitions, samples, and experiment grids bit for
bit.  This is a wire-level contract, not an implementation detail.

SplitMix64 (Steele, Lea & Flood's ``splitmix64``):

    state_t = (seed + (t + 1) * 0x9E3779B97F4A7C15)  mod 2**64
    word_t  = mix64(state_t)

where ``mix64`` is the splitmix finalizer::

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

Derived streams:

* uniform doubles: ``((word >> 11) + 0.5) * 2**-53`` -- strictly inside
  (0, 1), so samplers never emit zero.
* partition bits: ``word >> 63`` for index t in canonical order; bit 1
  assigns the bid to side A, bit 0 to side B.
* sub-seeds: ``split_seed(seed, *parts)`` folds integer path components,
  ``s -> mix64(s XOR (mix64((part + GOLDEN) mod 2**64) + GOLDEN))``, giving
  independent streams per (distribution, exponent, run, purpose) so samples
  may be evaluated in any order, on any number of threads, with identical
  results.

Block verification seeds a stream from the first 8 bytes of the block's
header hash, big-endian.  A consensus deployment would substitute a CSPRNG
keyed by the full hash here; the simulations need determinism, not
cryptographic strength, and this module is the documented substitution
point.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int, reduced mod 2**64."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * _M1) & _MASK64
    z = ((z ^ (z >> 27)) * _M2) & _MASK64
    return z ^ (z >> 31)


def words(seed: int, n: int) -> np.ndarray:
    """First n outputs of the SplitMix64 stream for `seed`, as uint64."""
    t = np.arange(1, n + 1, dtype=np.uint64)
    z = (np.uint64(seed & _MASK64) + t * np.uint64(GOLDEN)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int) -> np.ndarray:
    """n doubles strictly inside (0, 1), deterministic in `seed`."""
    w = words(seed, n)
    return ((w >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def bits(seed: int, n: int) -> np.ndarray:
    """n partition bits (uint8; 1 -> side A), one word consumed per index."""
    return (words(seed, n) >> np.uint64(63)).astype(np.uint8)


def split_seed(seed: int, *parts: int) -> int:
    """Fold integer path components into an independent 64-bit sub-seed."""
    s = seed & _MASK64
    for p in parts:
        s = mix64(s ^ ((mix64((p + GOLDEN) & _MASK64) + GOLDEN) & _MASK64))
    return s


def subsample_indices(n: int, k: int, seed: int) -> np.ndarray:
    """k distinct indices from range(n), via a partial Fisher-Yates shuffle.

    Uniform over size-k subsets (order included), deterministic in `seed`.
    Returns all indices when k >= n.
    """
    if k >= n:
        return np.arange(n, dtype=np.int64)
    u = uniforms(seed, k)
    idx = np.arange(n, dtype=np.int64)
    for t in range(k):
        r = t + int(u[t] * (n - t))
        idx[t], idx[r] = idx[r], idx[t]
    return idx[:k].copy()
