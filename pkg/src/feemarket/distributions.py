"""Value distributions for simulated bidders, plus transaction-data ingestion.

Four synthetic families cover the tail spectrum: a discrete uniform over the
integers 1..100 (finite support, exact ties), the uniform on (0, 1), a
half-normal (light tail), and the heavy-tailed inverse distribution with
CDF F(x) = 1 - 1/x on [1, inf). Real transaction data enters as a pool of
output sums transformed by one of v(x) = ln x, sqrt(x), or x, sampled with
replacement. Only ratios and trends are meaningful for the data kind; the
absolute scale of v(x) is arbitrary (the discount statistics are scale
invariant).

All sampling is inverse-transform (or erfinv for the half-normal) on the
strictly-interior uniforms from `feemarket.prng`, so draws are positive,
finite, and bit-reproducible for a fixed seed.

The bundled `data/synthetic_output_sums.csv` is a synthetic stand-in pool
(log-normal output sums, ln-mean 11, ln-sigma 1.6, seed 7, 5000 rows) for
tests and demos. It is NOT real blockchain data.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.special import erfinv

from feemarket import bids as _bidmod
from feemarket import prng
from feemarket.bids import BidVector
from feemarket.errors import EmptyPool, MalformedRow

SYNTHETIC_KINDS = ("discrete_uniform_1_100", "uniform_01", "half_normal", "inverse")
TRANSFORMS = ("log", "sqrt", "identity")


@dataclass(frozen=True)
class ValuePool:
    """Transformed data values plus the filtering report from loading."""

    values: np.ndarray
    dropped_rows: int
    transform: str
    source: str


@dataclass(frozen=True)
class ValueDistribution:
    kind: str
    sigma: float = 1.0           # half_normal only
    pool: ValuePool | None = None  # bitcoin_data only

    @property
    def label(self) -> str:
        if self.kind == "bitcoin_data":
            return f"data_{self.pool.transform}"
        if self.kind == "half_normal" and self.sigma != 1.0:
            return f"half_normal_{self.sigma:g}"
        return self.kind

    @staticmethod
    def discrete_uniform() -> "ValueDistribution":
        return ValueDistribution("discrete_uniform_1_100")

    @staticmethod
    def uniform01() -> "ValueDistribution":
        return ValueDistribution("uniform_01")

    @staticmethod
    def half_normal(sigma: float = 1.0) -> "ValueDistribution":
        return ValueDistribution("half_normal", sigma=sigma)

    @staticmethod
    def inverse() -> "ValueDistribution":
        return ValueDistribution("inverse")

    @staticmethod
    def from_data(path, transform: str) -> "ValueDistribution":
        return ValueDistribution("bitcoin_data", pool=load_value_pool(path, transform))


def transform_uniform(dist: ValueDistribution, u: np.ndarray) -> np.ndarray:
    """Map uniforms in (0,1) to distribution values (the sampling core)."""
    if dist.kind == "discrete_uniform_1_100":
        return np.floor(u * 100.0) + 1.0
    if dist.kind == "uniform_01":
        return u
    if dist.kind == "half_normal":
        # |N(0, sigma^2)| by inverse CDF: x = sigma * sqrt(2) * erfinv(u)
        return dist.sigma * np.sqrt(2.0) * erfinv(u)
    if dist.kind == "inverse":
        return 1.0 / (1.0 - u)
    if dist.kind == "bitcoin_data":
        pool = dist.pool.values
        return pool[np.minimum((u * pool.shape[0]).astype(np.int64), pool.shape[0] - 1)]
    raise ValueError(f"unknown distribution kind {dist.kind!r}")


def sample(dist: ValueDistribution, n: int, seed: int) -> BidVector:
    """n i.i.d. draws, sorted descending, deterministic in (dist, n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    values = transform_uniform(dist, prng.uniforms(seed, n))
    return _bidmod.from_sorted(np.ascontiguousarray(np.sort(values)[::-1]))


def load_value_pool(path, transform: str) -> ValuePool:
    """Read an output-sum CSV and apply v(x) in {ln x, sqrt x, x}.

    The file carries one positive integer per row under the header
    `output_sum_satoshi`. Rows with x <= 1 are dropped under the log
    transform (ln would not be a positive bid); the count is reported on the
    returned pool rather than silently discarded.
    """
    if transform not in TRANSFORMS:
        raise ValueError(f"transform must be one of {TRANSFORMS}")
    raw = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0].strip() != "output_sum_satoshi":
            raise MalformedRow(1, "expected header 'output_sum_satoshi'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not row[0].strip():
                raise MalformedRow(lineno, "empty row")
            try:
                x = int(row[0])
            except ValueError:
                raise MalformedRow(lineno, f"not an integer: {row[0]!r}") from None
            if x <= 0:
                raise MalformedRow(lineno, f"output sum must be positive, got {x}")
            raw.append(x)
    xs = np.asarray(raw, dtype=np.float64)
    dropped = 0
    if transform == "log":
        keep = xs > 1.0
        dropped = int(np.count_nonzero(~keep))
        values = np.log(xs[keep])
    elif transform == "sqrt":
        values = np.sqrt(xs)
    else:
        values = xs
    if values.size == 0:
        raise EmptyPool("no usable rows after filtering")
    values.setflags(write=False)
    return ValuePool(values, dropped, transform, str(path))


def load_bitcoin_values(path, transform: str) -> list[float]:
    """Thin wrapper returning just the transformed pool values."""
    return load_value_pool(path, transform).values.tolist()


def synthetic_data_path() -> str:
    """Path to the bundled synthetic stand-in pool (not real chain data)."""
    return str(resources.files("feemarket").joinpath("data/synthetic_output_sums.csv"))
