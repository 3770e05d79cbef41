"""Strategic bidding against the monopolistic price mechanism.

Three price notions for a bidder facing a fixed profile `others`:

* honest price      -- the monopolistic price when she bids her true value;
* strategic price   -- the smallest single bid that is still accepted;
* split-bid price   -- the smallest total payment achievable by submitting
                       u equal bids instead of one (u = 1 recovers the
                       strategic price, so splitting never costs more).

The strategic price is found over the finite candidate set
{R(others)/m : m in [k*+1, n+1]} union {others_j}: the accepted/rejected
status of a bid is a step function whose breakpoints all lie in that set.
Every returned price is re-verified by direct evaluation, with a
next-representable-float retry for candidates landing exactly on an
acceptance boundary (float division can round a boundary bid one ulp short
of acceptance).

The split-bid price has a closed form: minimize R(w)/f(j) * (f(j) - j) over
j in [k*(w), n-1] sorted ranks, with f(j) = max(ceil(R(w)/w_j), j+1); the
winner splits into u = f(j*) - j* bids of R(w)/f(j*) each. `multibid_oracle`
checks the closed form by brute force and exists purely as a test oracle.

The discount ratio of a bidder is the relative saving from bidding
strategically instead of honestly, or 0 if even her full value would be
rejected. `discount_stats` evaluates it per user over a whole profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from feemarket import prng
from feemarket._backend import kernels
from feemarket.bids import BidVector
from feemarket.errors import EmptyOthers, EmptySupport, TooFewBidders

EXACT_AVG_LIMIT = 4096  # full per-user sweep up to here; subsample beyond
DEFAULT_SUBSAMPLE = 256


@dataclass(frozen=True)
class MultibidResult:
    total: float
    b_star: float
    u_star: int


@dataclass(frozen=True)
class DiscountStats:
    delta_avg: float
    delta_max: float
    argmax_user: int
    k_star: int
    per_user: list[float] | None = None


def strategic_price(others: BidVector) -> float:
    """Smallest single bid accepted against `others`, verified directly."""
    if others.n == 0:
        raise EmptyOthers("strategic price needs at least one other bid")
    w = others.values
    R, ks = kernels.mono_scan(w)
    m = np.arange(ks + 1, others.n + 2, dtype=np.float64)
    cands = np.unique(np.concatenate([R / m, w]))
    for b in cands:
        b = float(b)
        if kernels.insert_outcome(w, b, 1)[2] <= b:
            return b
        b2 = float(np.nextafter(b, np.inf))
        if kernels.insert_outcome(w, b2, 1)[2] <= b2:
            return b2
    raise AssertionError("unreachable: the top bid is always accepted")


def multibid_price(others: BidVector) -> MultibidResult:
    """Cheapest accepted split of one bid into u equal parts (closed form)."""
    if others.n == 0:
        raise EmptyOthers("split-bid price needs at least one other bid")
    _, b, u, _ = kernels.multibid_scan(others.values)
    while kernels.insert_outcome(others.values, b, u)[2] > b:
        b = float(np.nextafter(b, np.inf))
    return MultibidResult(total=b * u, b_star=b, u_star=u)


def multibid_oracle(others: BidVector) -> float:
    """Brute-force minimum of u * b over accepted splits; test oracle only.

    For every u in [1, n+1] checks the exact breakpoint candidates
    {R/m : m in [1, n+u]} and {others_j} by direct evaluation (with the same
    boundary retry the production path uses) plus a 10^4-point grid over
    (0, max bid]. Grid points that cannot beat the best total found so far
    are skipped; that is exact for a minimum. Intended for small n.
    """
    if others.n == 0:
        raise EmptyOthers("oracle needs at least one other bid")
    w = others.values
    n = others.n
    R, _ = kernels.mono_scan(w)
    grid = np.linspace(0.0, float(w[0]), 10_001)[1:]
    best = np.inf
    for u in range(1, n + 2):
        m = np.arange(1, n + u + 1, dtype=np.float64)
        for b in np.unique(np.concatenate([R / m, w])):
            b = float(b)
            if u * b >= best:
                continue
            if kernels.insert_outcome(w, b, u)[2] <= b:
                best = u * b
                continue
            b2 = float(np.nextafter(b, np.inf))
            if u * b2 < best and kernels.insert_outcome(w, b2, u)[2] <= b2:
                best = u * b2
        cut = int(np.searchsorted(grid, best / u, side="left"))
        for b in grid[:cut]:
            b = float(b)
            if u * b < best and kernels.insert_outcome(w, b, u)[2] <= b:
                best = u * b
    return float(best)


def _mode_price(others: BidVector, mode: str) -> float:
    if mode == "single":
        return strategic_price(others)
    if mode == "multibid":
        return multibid_price(others).total
    raise ValueError(f"unknown mode {mode!r}")


def discount_ratio(v_i: float, others: BidVector, mode: str = "single") -> float:
    """Relative saving of bidding strategically vs honestly; 0 if she loses."""
    if v_i <= 0:
        raise ValueError("value must be positive")
    p_mode = _mode_price(others, mode)
    if v_i < p_mode:
        return 0.0
    p_honest = kernels.insert_outcome(others.values, float(v_i), 1)[2]
    return 1.0 - p_mode / p_honest


_MODE_CODE = {"single": 0, "multibid": 1}


def _sweep(values: np.ndarray, eval_idx: np.ndarray, mode: str) -> np.ndarray:
    return kernels.delta_sweep(values, np.asarray(eval_idx, dtype=np.int64), _MODE_CODE[mode])


def discount_stats(
    b: BidVector,
    mode: str = "multibid",
    avg_subsample: int | None = None,
    subsample_seed: int = 0,
) -> DiscountStats:
    """Per-profile discount summary: max over users and average over users.

    The max is evaluated at the highest bidder (rank 0): for single bids the
    discount ratio is monotone in the bidder's value, and the same rule is
    applied in split-bid mode (cross-checked against full scans in the test
    suite). The average is exact for n <= 4096 unless `avg_subsample` asks
    for a uniform random subsample of users, which is what the experiment
    grids do at larger n; `subsample_seed` pins that choice.
    """
    if b.n < 2:
        raise TooFewBidders("discount statistics need at least two bidders")
    if mode not in _MODE_CODE:
        raise ValueError(f"unknown mode {mode!r}")
    values = b.values
    n = b.n
    rev, kfull = kernels.mono_scan(values)

    # users sharing a bid value share their leave-one-out prices
    uniq, first_idx, inverse = np.unique(values, return_index=True, return_inverse=True)

    if avg_subsample is None or avg_subsample >= n:
        deltas_repr = _sweep(values, first_idx, mode)
        per_user = deltas_repr[inverse]
        delta_avg = float(np.mean(per_user))
        delta_max = float(per_user[0])
        return DiscountStats(delta_avg, delta_max, 0, kfull, per_user.tolist())

    chosen = prng.subsample_indices(n, avg_subsample, subsample_seed)
    need = np.unique(np.concatenate([inverse[chosen], inverse[:1]]))
    deltas_need = _sweep(values, first_idx[need], mode)
    lookup = np.full(uniq.shape[0], np.nan)
    lookup[need] = deltas_need
    delta_avg = float(np.mean(lookup[inverse[chosen]]))
    delta_max = float(lookup[inverse[0]])
    return DiscountStats(delta_avg, delta_max, 0, kfull, None)


def worst_case_discount(others: BidVector, support, mode: str = "single") -> float:
    """Best discount ratio available to a bidder over a finite value support."""
    vals = list(support)
    if not vals:
        raise EmptySupport("support must be non-empty")
    return max(discount_ratio(float(v), others, mode) for v in vals)
