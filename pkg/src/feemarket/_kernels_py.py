"""Pure numpy kernels: the fallback backend.

Mirrors the compiled extension in `_kernels.pyx` function for function.
Both backends must produce bit-identical floats: every product, division,
and tie-break here is the same IEEE-754 operation the C loops perform, and
reductions that cross users/partitions are left to the caller.
"""

from __future__ import annotations

import numpy as np


def mono_scan(values: np.ndarray) -> tuple[float, int]:
    """Revenue-maximizing (revenue, k) over prefixes of a descending vector.

    Ties in k * values[k-1] break toward the largest k. Empty -> (0.0, 0).
    """
    n = values.shape[0]
    if n == 0:
        return 0.0, 0
    rev = values * np.arange(1.0, n + 1.0)
    m = rev.max()
    k = n - int(np.argmax(rev[::-1] == m))
    return float(m), k


def mono_scan_capped(values: np.ndarray, cap: int) -> tuple[float, int]:
    n = values.shape[0]
    return mono_scan(values[: min(n, cap)])


def _rank_of(values: np.ndarray, b: float) -> int:
    """Number of entries >= b in a descending vector (binary search)."""
    n = values.shape[0]
    return n - int(np.searchsorted(values[::-1], b, side="left"))


def insert_outcome(values: np.ndarray, b: float, copies: int) -> tuple[float, int, float]:
    """(revenue, k, price) after merging `copies` bids of value b into `values`."""
    j = _rank_of(values, b)
    merged = np.concatenate([values[:j], np.full(copies, b), values[j:]])
    rev, k = mono_scan(merged)
    price = float(merged[k - 1]) if k > 0 else 0.0
    return rev, k, price


def multibid_scan(values: np.ndarray) -> tuple[float, float, int, int]:
    """Closed-form split-bid minimization over a descending vector w.

    Scans j from k*(w) to len(w), with f(j) = max(ceil(R/w_j), j+1); the
    candidate total is R/f * (f - j) paid as u = f - j equal bids of R/f.
    Returns (total, bid, u, j) for the first j attaining the minimum. The
    result is unverified: callers re-check the winning bid by direct
    evaluation (see `_verified_total`).
    """
    R, ks = mono_scan(values)
    n = values.shape[0]
    j = np.arange(ks, n + 1, dtype=np.float64)
    wj = values[ks - 1 :]
    f = np.maximum(np.ceil(R / wj), j + 1.0)
    tot = R / f * (f - j)
    a = int(np.argmin(tot))
    return float(tot[a]), float(R / f[a]), int(f[a] - j[a]), int(j[a])


def _insert_price_skip(values: np.ndarray, skip: int, b: float, copies: int) -> float:
    w = np.delete(values, skip)
    return insert_outcome(w, b, copies)[2]


def _verified_total(values: np.ndarray, skip: int, b: float, u: int) -> float:
    """Raise b to the next float until the u-way split is genuinely accepted.

    Guards the knife-edge where fl(R/f) * f rounds below R and the
    closed-form bid would lose by one ulp under exact float comparison.
    """
    while _insert_price_skip(values, skip, b, u) > b:
        b = np.nextafter(b, np.inf)
    return b * u


def _strategic_price_loo(values: np.ndarray, skip: int) -> float:
    """Minimal accepted single bid against values-without-skip.

    Candidate set {R/m : m in [k*+1, n_w+1]} union {w_j}; each candidate is
    verified by direct evaluation, with a next-float retry for candidates
    that sit exactly on an acceptance boundary.
    """
    w = np.delete(values, skip)
    R, ks = mono_scan(w)
    m = np.arange(ks + 1, w.shape[0] + 2, dtype=np.float64)
    cands = np.unique(np.concatenate([R / m, w]))
    for b in cands:
        b = float(b)
        if insert_outcome(w, b, 1)[2] <= b:
            return b
        b2 = float(np.nextafter(b, np.inf))
        if insert_outcome(w, b2, 1)[2] <= b2:
            return b2
    raise AssertionError("no accepted candidate; max bid is always accepted")


def delta_sweep(values: np.ndarray, eval_idx: np.ndarray, mode: int) -> np.ndarray:
    """Discount ratio for each requested (0-based, descending-rank) index.

    mode 0 = single strategic bid, mode 1 = split bids. The honest price is
    the monopolistic price of the full vector, identical for every user.
    """
    n = values.shape[0]
    _, kfull = mono_scan(values)
    p_honest = float(values[kfull - 1])
    out = np.empty(eval_idx.shape[0], dtype=np.float64)
    for t in range(eval_idx.shape[0]):
        i = int(eval_idx[t])
        if mode == 1:
            w = np.delete(values, i)
            _, b, u, _ = multibid_scan(w)
            total = _verified_total(values, i, b, u)
        else:
            total = _strategic_price_loo(values, i)
        vi = float(values[i])
        out[t] = 0.0 if vi < total else 1.0 - total / p_honest
    return out


def rsop_eval(values: np.ndarray, labels: np.ndarray) -> tuple[float, float, int, int, float]:
    """(p_a, p_b, winners_a, winners_b, revenue) for one A/B assignment.

    labels is uint8 aligned with `values` (1 -> A). Each side is priced by
    its own monopolistic price; winners on a side are the bids at or above
    the price of the complementary side. An empty side prices at zero.
    """
    in_a = labels.astype(bool)
    side_a = values[in_a]
    side_b = values[~in_a]
    _, ka = mono_scan(side_a)
    _, kb = mono_scan(side_b)
    p_a = float(side_a[ka - 1]) if ka > 0 else 0.0
    p_b = float(side_b[kb - 1]) if kb > 0 else 0.0
    win_a = int(np.count_nonzero(side_a >= p_b))
    win_b = int(np.count_nonzero(side_b >= p_a))
    revenue = win_a * p_b + win_b * p_a
    return p_a, p_b, win_a, win_b, revenue


def rsop_all_partitions(values: np.ndarray) -> np.ndarray:
    """Revenue for every one of the 2^n A/B assignments.

    Mask bit t set means index t is in A; the returned array is indexed by
    mask. Intended for n <= 20; work is chunked to bound memory.
    """
    n = values.shape[0]
    total = 1 << n
    out = np.empty(total, dtype=np.float64)
    if n == 0:
        out[0] = 0.0
        return out
    asc = values[::-1]
    shifts = np.arange(n, dtype=np.uint64)
    chunk = min(total, 1 << 15)
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        bits_ = ((masks[:, None] >> shifts) & np.uint64(1)).astype(np.float64)
        out[lo : lo + masks.shape[0]] = _chunk_revenues(values, asc, bits_)
    return out


def _side_price(values: np.ndarray, bits_: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    cnt = np.cumsum(bits_, axis=1)
    term = np.where(bits_ == 1.0, cnt * values, -np.inf)
    rev = term.max(axis=1)
    last = (n - 1) - np.argmax(term[:, ::-1] == rev[:, None], axis=1)
    return np.where(np.isfinite(rev), values[last], 0.0)


def _chunk_revenues(values: np.ndarray, asc: np.ndarray, bits_: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    cob = 1.0 - bits_
    p_a = _side_price(values, bits_)
    p_b = _side_price(values, cob)
    cnt_a = np.cumsum(bits_, axis=1)
    cnt_b = np.cumsum(cob, axis=1)
    # winners on A: members among the first num(values, p_b) ranks
    j_b = n - np.searchsorted(asc, p_b, side="left")
    j_a = n - np.searchsorted(asc, p_a, side="left")
    win_a = np.where(j_b > 0, np.take_along_axis(cnt_a, np.maximum(j_b - 1, 0)[:, None], axis=1)[:, 0], 0.0)
    win_b = np.where(j_a > 0, np.take_along_axis(cnt_b, np.maximum(j_a - 1, 0)[:, None], axis=1)[:, 0], 0.0)
    return win_a * p_b + win_b * p_a
