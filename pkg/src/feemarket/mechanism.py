"""The monopolistic price mechanism and the pay-your-bid baseline.

Under monopolistic pricing the block creator picks the number of included
transactions k to maximize k * bids[k] (bids sorted descending, 1-indexed),
and every included transaction pays the same fee bids[k*]. Ties in the
revenue are broken toward the largest k, by exact float equality -- no
epsilon lives in the mechanism itself.

The pay-your-bid baseline models today's equilibrium: with room for `l`
transactions everyone shades down to the (l+1)-th highest value, and an
uncontested block earns essentially nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from feemarket._backend import kernels
from feemarket.bids import BidVector


@dataclass(frozen=True)
class MonopolisticOutcome:
    revenue: float
    k_star: int
    price: float


def monopolistic_outcome(b: BidVector) -> MonopolisticOutcome:
    """Max over k of k * bids[k], maximal k under ties; zeros when empty."""
    rev, k = kernels.mono_scan(b.values)
    price = float(b.values[k - 1]) if k > 0 else 0.0
    return MonopolisticOutcome(rev, k, price)


def monopolistic_outcome_capped(b: BidVector, cap: int) -> MonopolisticOutcome:
    """Same scan with k restricted to [1, min(n, cap)] (block-size bound)."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    rev, k = kernels.mono_scan_capped(b.values, cap)
    price = float(b.values[k - 1]) if k > 0 else 0.0
    return MonopolisticOutcome(rev, k, price)


def pay_your_bid_revenue(b: BidVector, block_size: int) -> float:
    """Equilibrium pay-your-bid revenue for a block of `block_size` slots.

    l * bids[l+1] when the block is contested (l < n); 0 otherwise, since an
    uncontested slot is won with an arbitrarily small fee.
    """
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    if block_size >= b.n:
        return 0.0
    return float(block_size * b.values[block_size])
