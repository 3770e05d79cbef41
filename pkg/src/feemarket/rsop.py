"""The random-sampling optimal price (RSOP) auction and block verification.

Bids are split into two sides by independent fair coin flips; each side is
priced by the *other* side's monopolistic price, so no bidder can influence
the price she faces. Winners on a side are the bids at or above the
complementary price, an empty side prices at zero, and the block's fee
revenue is split: a fraction (1 - alpha) to the miner of this block, alpha
carried forward to the next block's miner. Only the single-block accounting
is modeled here; how the carried share reaches a future miner is protocol
plumbing outside this library.

Consensus determinism: verification derives the partition from the block's
header hash (first 8 bytes, big-endian) through the SplitMix64 stream
documented in `feemarket.prng`, so every node accepts the same transactions
at the same fees.

Miner manipulation helpers model the two known deviations -- inflating the
block with false bids at the monopolistic price, and withholding real bids
-- plus checkers for the conjecture that no partition ever yields more than
the monopolistic revenue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from feemarket import bids as _bidmod
from feemarket import prng
from feemarket._backend import kernels
from feemarket.bids import BidVector
from feemarket.errors import (
    BudgetExceeded,
    DuplicateTxId,
    IndexOutOfRange,
    LengthMismatch,
    MalformedBlock,
)
from feemarket.mechanism import monopolistic_outcome

DEFAULT_ALPHA = 0.1
EXACT_PARTITION_LIMIT = 20       # enumerate all 2^n partitions up to here
REMOVAL_SUBSET_LIMIT = 16
REMOVAL_BUDGET = 2**24           # sum over subsets of 2^|subset| evaluations

# sub-seed stream tags (see prng.split_seed)
STREAM_SAMPLE = 11
STREAM_REMOVAL = 13


@dataclass(frozen=True)
class Partition:
    """A/B side assignment, one label per bid index in canonical order."""

    labels: np.ndarray  # uint8, 1 -> A
    seed: int | None = None

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    def as_labels(self) -> list[str]:
        return ["A" if x else "B" for x in self.labels.tolist()]


@dataclass(frozen=True)
class RsopOutcome:
    p_a: float
    p_b: float
    winners_a: tuple[int, ...]
    winners_b: tuple[int, ...]
    revenue: float
    miner_share: float
    carry_share: float


def partition_bids(n: int, seed: int) -> Partition:
    """Deterministic coin-flip partition: one stream word per index, MSB -> A."""
    if n < 0:
        raise ValueError("n must be >= 0")
    labels = prng.bits(seed, n)
    labels.setflags(write=False)
    return Partition(labels, seed)


def rsop_outcome(b: BidVector, part: Partition, alpha: float = DEFAULT_ALPHA) -> RsopOutcome:
    """Price both sides, settle winners and fees, and split the revenue."""
    if part.n != b.n:
        raise LengthMismatch(f"partition has {part.n} labels for {b.n} bids")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    p_a, p_b, _, _, revenue = kernels.rsop_eval(b.values, part.labels)
    in_a = part.labels.astype(bool)
    idx = np.arange(b.n)
    winners_a = tuple(idx[in_a & (b.values >= p_b)].tolist())
    winners_b = tuple(idx[~in_a & (b.values >= p_a)].tolist())
    return RsopOutcome(
        p_a=p_a,
        p_b=p_b,
        winners_a=winners_a,
        winners_b=winners_b,
        revenue=revenue,
        miner_share=(1.0 - alpha) * revenue,
        carry_share=alpha * revenue,
    )


def _sample_revenues(values: np.ndarray, samples: int, seed: int) -> np.ndarray:
    out = np.empty(samples, dtype=np.float64)
    n = values.shape[0]
    for s in range(samples):
        labels = prng.bits(prng.split_seed(seed, STREAM_SAMPLE, s), n)
        out[s] = kernels.rsop_eval(values, labels)[4]
    return out


def rsop_expected_revenue(b: BidVector, samples: int, seed: int = 0) -> tuple[float, float]:
    """(mean, stderr) of the auction revenue over random partitions.

    Exact for n <= 20 by enumerating all 2^n partitions (stderr 0);
    Monte Carlo with per-sample sub-seeds otherwise.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if b.n <= EXACT_PARTITION_LIMIT:
        revs = kernels.rsop_all_partitions(b.values)
        return float(np.mean(revs)), 0.0
    revs = _sample_revenues(b.values, samples, seed)
    stderr = float(np.std(revs, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return float(np.mean(revs)), stderr


# ---------------------------------------------------------------------------
# block verification

HASH_HEX_LEN = 64


@dataclass(frozen=True)
class Block:
    """Minimal block abstraction: hash, ordered transactions, alpha."""

    header_hash: bytes
    transactions: tuple[tuple[bytes, float], ...]  # (txid, bid), order-significant
    alpha: float


@dataclass(frozen=True)
class BlockVerification:
    seed: int
    outcome: RsopOutcome          # winner indices refer to block order
    valid: tuple[tuple[str, float], ...]  # (txid hex, fee) for accepted transactions


def _hex_bytes(s, what: str) -> bytes:
    if not isinstance(s, str) or len(s) != HASH_HEX_LEN:
        raise MalformedBlock(f"{what} must be {HASH_HEX_LEN} hex characters")
    try:
        return bytes.fromhex(s)
    except ValueError:
        raise MalformedBlock(f"{what} is not valid hex") from None


def block_from_dict(obj) -> Block:
    """Parse and structurally validate the JSON block format."""
    if not isinstance(obj, dict):
        raise MalformedBlock("block must be a JSON object")
    for key in ("header_hash", "alpha", "transactions"):
        if key not in obj:
            raise MalformedBlock(f"missing field {key!r}")
    header = _hex_bytes(obj["header_hash"], "header_hash")
    alpha = obj["alpha"]
    if not isinstance(alpha, (int, float)) or not 0.0 <= float(alpha) <= 1.0:
        raise MalformedBlock("alpha must be a number in [0, 1]")
    txs = obj["transactions"]
    if not isinstance(txs, list):
        raise MalformedBlock("transactions must be an array")
    seen = set()
    parsed = []
    for t in txs:
        if not isinstance(t, dict) or "txid" not in t or "bid" not in t:
            raise MalformedBlock("each transaction needs txid and bid")
        txid = _hex_bytes(t["txid"], "txid")
        if txid in seen:
            raise DuplicateTxId(t["txid"])
        seen.add(txid)
        bid = t["bid"]
        if not isinstance(bid, (int, float)) or not np.isfinite(bid) or bid <= 0:
            raise MalformedBlock("bids must be positive finite numbers")
        parsed.append((txid, float(bid)))
    return Block(header, tuple(parsed), float(alpha))


def load_block(path) -> Block:
    with open(path, "r", encoding="utf-8") as fh:
        return block_from_dict(json.load(fh))


def block_seed(block: Block) -> int:
    """Partition seed: first 8 bytes of the header hash, big-endian."""
    return int.from_bytes(block.header_hash[:8], "big")


def verify_block(block: Block) -> BlockVerification:
    """Consensus verification: pure function of the block bytes.

    Transactions are partitioned in block order with the hash-derived seed;
    accepted ones pay the complementary side's price, rejected ones pay
    nothing.
    """
    seed = block_seed(block)
    n = len(block.transactions)
    part = partition_bids(n, seed)
    raw = np.array([bid for _, bid in block.transactions], dtype=np.float64)

    order = np.argsort(-raw, kind="stable")  # descending, ties in block order
    sorted_vals = np.ascontiguousarray(raw[order])
    sorted_labels = np.ascontiguousarray(part.labels[order])
    p_a, p_b, _, _, revenue = kernels.rsop_eval(sorted_vals, sorted_labels)

    fees = np.where(part.labels.astype(bool), p_b, p_a)
    accepted = raw >= fees
    idx = np.arange(n)
    in_a = part.labels.astype(bool)
    outcome = RsopOutcome(
        p_a=p_a,
        p_b=p_b,
        winners_a=tuple(idx[in_a & accepted].tolist()),
        winners_b=tuple(idx[~in_a & accepted].tolist()),
        revenue=revenue,
        miner_share=(1.0 - block.alpha) * revenue,
        carry_share=block.alpha * revenue,
    )
    valid = tuple(
        (block.transactions[i][0].hex(), float(fees[i])) for i in idx[accepted].tolist()
    )
    return BlockVerification(seed=seed, outcome=outcome, valid=valid)


# ---------------------------------------------------------------------------
# miner manipulation strategies

@dataclass(frozen=True)
class AugmentedBids:
    """Bid vector with miner-owned (false) bids marked by sorted index."""

    bids: BidVector
    miner_owned: np.ndarray  # bool, aligned with bids.values


def false_bid_strategy(b: BidVector, copies: int) -> AugmentedBids:
    """Append `copies` false bids at the monopolistic price of `b`.

    Real bids come first among equal values, so the ownership mask is
    deterministic. Miner-owned winners are self-payments: the miner gets
    the (1 - alpha) share of her own fee back and forfeits the alpha share.
    """
    if copies < 0:
        raise ValueError("copies must be >= 0")
    price = monopolistic_outcome(b).price
    merged = np.concatenate([b.values, np.full(copies, price)])
    owned = np.concatenate([np.zeros(b.n, dtype=bool), np.ones(copies, dtype=bool)])
    order = np.argsort(-merged, kind="stable")
    out = _bidmod.from_sorted(np.ascontiguousarray(merged[order]))
    mask = owned[order]
    mask.setflags(write=False)
    return AugmentedBids(out, mask)


def miner_net_revenue(aug: AugmentedBids, labels: np.ndarray, alpha: float) -> float:
    """Miner's net income for one partition of an augmented bid vector.

    net = (1 - alpha) * fees(real winners) - alpha * fees(owned winners):
    the miner receives (1 - alpha) of all fees but pays her own bids' fees.
    """
    values = aug.bids.values
    p_a, p_b, _, _, _ = kernels.rsop_eval(values, labels)
    in_a = labels.astype(bool)
    fees = np.where(in_a, p_b, p_a)
    wins = values >= fees
    real = float(np.sum(fees[wins & ~aug.miner_owned]))
    owned = float(np.sum(fees[wins & aug.miner_owned]))
    return (1.0 - alpha) * real - alpha * owned


def false_bid_expected_net(
    b: BidVector, copies: int, alpha: float, samples: int, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo (mean, stderr) of the miner's net under the false-bid strategy."""
    aug = false_bid_strategy(b, copies)
    n = aug.bids.n
    out = np.empty(samples, dtype=np.float64)
    for s in range(samples):
        labels = prng.bits(prng.split_seed(seed, STREAM_SAMPLE, s), n)
        out[s] = miner_net_revenue(aug, labels, alpha)
    stderr = float(np.std(out, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return float(np.mean(out)), stderr


def _subset_expected_revenue(values: np.ndarray, samples: int, seed: int) -> float:
    if values.shape[0] <= EXACT_PARTITION_LIMIT:
        return float(np.mean(kernels.rsop_all_partitions(values)))
    return float(np.mean(_sample_revenues(values, samples, seed)))


def remove_bids_search(
    b: BidVector,
    mode: str = "exhaustive",
    samples: int = 256,
    seed: int = 0,
) -> tuple[BidVector, float]:
    """Search for the bid subset maximizing expected RSOP revenue.

    exhaustive: every subset, each scored by exact enumeration of its
    partitions. The 3^n subset-partition pairs are capped by a fixed budget,
    so n <= 15 in practice (n > 16 is rejected outright). Ascending masks;
    the first maximum wins.

    greedy: only keeps top-j prefixes of the sorted vector (dropping lowest
    bids first), scored exactly when small and by Monte Carlo otherwise.
    """
    values = b.values
    n = b.n
    if mode == "exhaustive":
        if n > REMOVAL_SUBSET_LIMIT:
            raise BudgetExceeded(f"exhaustive subset search is capped at n = {REMOVAL_SUBSET_LIMIT}")
        if 3**n > REMOVAL_BUDGET:
            raise BudgetExceeded(f"3^{n} subset-partition evaluations exceed the {REMOVAL_BUDGET} budget")
        best_rev = -1.0
        best_mask = 0
        for mask in range(1 << n):
            keep = values[[(mask >> t) & 1 == 1 for t in range(n)]]
            rev = float(np.mean(kernels.rsop_all_partitions(keep)))
            if rev > best_rev:
                best_rev = rev
                best_mask = mask
        keep = values[[(best_mask >> t) & 1 == 1 for t in range(n)]]
        return _bidmod.from_sorted(np.ascontiguousarray(keep)), best_rev
    if mode == "greedy":
        best_rev = -1.0
        best_j = n
        for j in range(1, n + 1):  # ties prefer fewer kept bids
            rev = _subset_expected_revenue(values[:j], samples, prng.split_seed(seed, STREAM_REMOVAL, j))
            if rev > best_rev:
                best_rev = rev
                best_j = j
        return _bidmod.from_sorted(values[:best_j].copy()), best_rev
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# conjecture checkers and truthfulness probes

def check_conjecture_rsop_leq_monopolistic(
    b: BidVector, samples: int = 10_000, seed: int = 0
) -> tuple[bool, Partition | None]:
    """Check RSOP revenue <= monopolistic revenue over partitions.

    Exhaustive for n <= 20, sampled otherwise. A violation is a research
    finding: the first offending partition is returned as a witness.
    """
    R = monopolistic_outcome(b).revenue
    n = b.n
    if n <= EXACT_PARTITION_LIMIT:
        revs = kernels.rsop_all_partitions(b.values)
        bad = np.nonzero(revs > R)[0]
        if bad.size:
            mask = int(bad[0])
            labels = np.array([(mask >> t) & 1 for t in range(n)], dtype=np.uint8)
            return False, Partition(labels, None)
        return True, None
    for s in range(samples):
        labels = prng.bits(prng.split_seed(seed, STREAM_SAMPLE, s), n)
        if kernels.rsop_eval(b.values, labels)[4] > R:
            return False, Partition(labels, None)
    return True, None


def truthfulness_probe(v: BidVector, i: int, deviations, part: Partition) -> bool:
    """True iff honest bidding maximizes bidder i's utility on this partition.

    The partition is fixed by index, never re-derived from bid contents; a
    bidder's price always comes from the complementary side, so her own bid
    can only toggle whether she wins at that price.
    """
    if not 0 <= i < v.n:
        raise IndexOutOfRange(f"bidder index {i} out of range for n = {v.n}")
    if part.n != v.n:
        raise LengthMismatch(f"partition has {part.n} labels for {v.n} bids")
    values = v.values
    in_a = part.labels.astype(bool)

    comp = np.ascontiguousarray(np.sort(values[~in_a] if in_a[i] else values[in_a])[::-1])
    k = kernels.mono_scan(comp)[1]
    p_comp = float(comp[k - 1]) if k > 0 else 0.0

    def utility(bid_i: float) -> float:
        # the complementary side never contains bidder i, so p_comp is fixed
        return (float(values[i]) - p_comp) if bid_i >= p_comp else 0.0

    honest = utility(float(values[i]))
    return all(utility(float(d)) <= honest for d in deviations)


def _bidder_utility(values: np.ndarray, mine: np.ndarray, value: float, part: Partition) -> float:
    """Utility of a bidder owning the `mine`-marked bids under one partition.

    value * [any owned bid accepted] minus the fees of all accepted owned
    bids (duplicate acceptances still pay; she only needed one through).
    """
    if part.n != values.shape[0]:
        raise LengthMismatch("partition length must match the bid vector")
    p_a, p_b, _, _, _ = kernels.rsop_eval(values, part.labels)
    fees = np.where(part.labels.astype(bool), p_b, p_a)
    won = mine & (values >= fees)
    return value * (1.0 if won.any() else 0.0) - float(np.sum(fees[won]))


def rsop_split_probe(
    v: BidVector, i: int, pieces, part_honest: Partition, part_split: Partition
) -> tuple[float, float]:
    """Utilities (honest, split) for bidder i swapping her bid for `pieces`.

    Whether splitting can ever pay under random partitioning is an open
    question; this hook only evaluates scenarios and asserts nothing. The
    split vector is the other bids plus the pieces, re-sorted; `part_split`
    must have its length (partitions are caller-supplied so a probe can
    explore specific coin flips).
    """
    if not 0 <= i < v.n:
        raise IndexOutOfRange(f"bidder index {i} out of range for n = {v.n}")
    vi = float(v.values[i])
    mine = np.zeros(v.n, dtype=bool)
    mine[i] = True
    u_honest = _bidder_utility(v.values, mine, vi, part_honest)

    merged = np.concatenate([np.delete(v.values, i), np.asarray([float(p) for p in pieces])])
    order = np.argsort(-merged, kind="stable")
    ranked = np.ascontiguousarray(merged[order])
    mine_split = order >= v.n - 1  # the appended pieces, tracked through the sort
    u_split = _bidder_utility(ranked, mine_split, vi, part_split)
    return u_honest, u_split
