"""Validated bid vectors.

A `BidVector` owns a descending-sorted, immutable float64 array of strictly
positive finite bids. Sorting happens once at construction; every downstream
algorithm is a scan over ranks of the sorted vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from feemarket.errors import NonFiniteBid, NonPositiveBid


@dataclass(frozen=True)
class BidVector:
    """Descending-sorted positive bids. Construct via `make_bid_vector`."""

    values: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.values.tolist())

    def __repr__(self) -> str:
        head = ", ".join(f"{v:g}" for v in self.values[:8].tolist())
        tail = ", ..." if self.n > 8 else ""
        return f"BidVector([{head}{tail}], n={self.n})"


def _freeze(values: np.ndarray) -> BidVector:
    values = np.ascontiguousarray(values, dtype=np.float64)
    values.setflags(write=False)
    return BidVector(values)


def make_bid_vector(raw) -> BidVector:
    """Validate and sort bids descending. Empty input gives an empty vector.

    Raises NonFiniteBid for NaN/inf entries and NonPositiveBid for entries
    <= 0; zero bids are rejected so every price and ratio stays positive.
    """
    values = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw, dtype=np.float64)
    if values.ndim != 1:
        values = values.reshape(-1)
    if values.size:
        if not np.isfinite(values).all():
            raise NonFiniteBid("bids must be finite numbers")
        if not (values > 0).all():
            raise NonPositiveBid("bids must be strictly positive")
    return _freeze(np.sort(values)[::-1])


def from_sorted(values: np.ndarray) -> BidVector:
    """Wrap an already descending-sorted, validated array (internal fast path)."""
    return _freeze(values)


def num_at_least(b: BidVector, z: float) -> int:
    """|{i : bids[i] >= z}|, by binary search on the sorted vector."""
    asc = b.values[::-1]
    return b.n - int(np.searchsorted(asc, z, side="left"))


def insert(b: BidVector, value: float, copies: int = 1) -> BidVector:
    """New vector with `copies` bids of `value` merged in at their rank."""
    j = num_at_least(b, value)
    return _freeze(np.concatenate([b.values[:j], np.full(copies, float(value)), b.values[j:]]))


def leave_one_out(b: BidVector, i: int) -> BidVector:
    """New vector with the bid at descending rank `i` (0-based) removed."""
    return _freeze(np.delete(b.values, i))
