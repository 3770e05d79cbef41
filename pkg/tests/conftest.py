"""Shared fixtures and seeded instance generators for the test suite."""

import numpy as np
import pytest

from feemarket import bids as bidmod
from feemarket import prng
from feemarket.bids import BidVector


def random_instance(seed: int, n_max: int = 32, n_min: int = 1, discrete: bool = False) -> BidVector:
    """One reproducible bid vector; discrete draws integers in [1, 100]."""
    u = prng.uniforms(seed, n_max + 1)
    n = n_min + int(u[0] * (n_max - n_min + 1))
    vals = u[1 : n + 1]
    if discrete:
        vals = np.floor(vals * 100.0) + 1.0
    else:
        vals = vals * 10.0
    return bidmod.from_sorted(np.ascontiguousarray(np.sort(vals)[::-1]))


def instances(count: int, base_seed: int, n_max: int = 32, n_min: int = 1):
    """Alternating continuous/discrete instance stream."""
    for t in range(count):
        yield random_instance(prng.split_seed(base_seed, t), n_max, n_min, discrete=bool(t % 2))


@pytest.fixture(scope="session")
def brute_force_mono():
    """Independent oracle: plain-Python max of k * bids[k], maximal k on ties."""

    def run(values):
        vals = sorted(values, reverse=True)
        best, bk = 0.0, 0
        for k in range(1, len(vals) + 1):
            r = k * vals[k - 1]
            if r >= best:
                best, bk = r, k
        price = vals[bk - 1] if bk else 0.0
        return best, bk, price

    return run
