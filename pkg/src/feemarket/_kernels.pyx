# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the hot inner loops.

Function-for-function twin of `_kernels_py.py`; every product, division,
comparison, and tie-break is the same IEEE-754 operation, so the two
backends return bit-identical floats. Reductions across users or partitions
stay in the Python layer.
"""

from libc.math cimport INFINITY, ceil, nextafter

import numpy as np


cdef inline Py_ssize_t _rank_of(const double[::1] w, Py_ssize_t m, double b) nogil:
    # number of entries >= b in a descending array
    cdef Py_ssize_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if w[mid] >= b:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline (double, Py_ssize_t) _scan(const double[::1] values, Py_ssize_t n) nogil:
    cdef double rev = 0.0, r
    cdef Py_ssize_t k = 0, t
    for t in range(n):
        r = (<double> (t + 1)) * values[t]
        if r >= rev:
            rev = r
            k = t + 1
    return rev, k


def mono_scan(const double[::1] values):
    """Revenue-maximizing (revenue, k); ties toward the largest k."""
    cdef double rev
    cdef Py_ssize_t k
    rev, k = _scan(values, values.shape[0])
    return rev, k


def mono_scan_capped(const double[::1] values, Py_ssize_t cap):
    cdef Py_ssize_t n = values.shape[0]
    cdef double rev
    cdef Py_ssize_t k
    rev, k = _scan(values, n if n < cap else cap)
    return rev, k


cdef (double, Py_ssize_t, double) _insert(const double[::1] w, Py_ssize_t m,
                                          double b, Py_ssize_t copies) nogil:
    # (revenue, k, price) of the merge of w (descending) with `copies` bids of b
    cdef Py_ssize_t rank = 0, t, c, k = 0
    cdef double best = 0.0, price = 0.0, r
    cdef bint placed = False
    for t in range(m):
        if (not placed) and w[t] < b:
            for c in range(copies):
                rank += 1
                r = (<double> rank) * b
                if r >= best:
                    best = r
                    k = rank
                    price = b
            placed = True
        rank += 1
        r = (<double> rank) * w[t]
        if r >= best:
            best = r
            k = rank
            price = w[t]
    if not placed:
        for c in range(copies):
            rank += 1
            r = (<double> rank) * b
            if r >= best:
                best = r
                k = rank
                price = b
    return best, k, price


def insert_outcome(const double[::1] values, double b, Py_ssize_t copies):
    """(revenue, k, price) after merging `copies` bids of value b."""
    cdef double rev, price
    cdef Py_ssize_t k
    rev, k, price = _insert(values, values.shape[0], b, copies)
    return rev, k, price


cdef double _insert_price_skip(const double[::1] v, Py_ssize_t n, Py_ssize_t skip,
                               double b, Py_ssize_t copies) nogil:
    # price of the merge of v-without-index-skip with `copies` bids of b
    cdef Py_ssize_t rank = 0, t, c
    cdef double best = 0.0, price = 0.0, r
    cdef bint placed = False
    for t in range(n):
        if t == skip:
            continue
        if (not placed) and v[t] < b:
            for c in range(copies):
                rank += 1
                r = (<double> rank) * b
                if r >= best:
                    best = r
                    price = b
            placed = True
        rank += 1
        r = (<double> rank) * v[t]
        if r >= best:
            best = r
            price = v[t]
    if not placed:
        for c in range(copies):
            rank += 1
            r = (<double> rank) * b
            if r >= best:
                best = r
                price = b
    return price


def multibid_scan(const double[::1] values):
    """Closed-form split-bid minimization; returns (total, bid, u, j), unverified."""
    cdef Py_ssize_t n = values.shape[0]
    cdef double R
    cdef Py_ssize_t ks
    R, ks = _scan(values, n)
    cdef double best = INFINITY, bestf = 0.0, f, fj, tot, wj
    cdef Py_ssize_t j, bestj = 0
    for j in range(ks, n + 1):
        wj = values[j - 1]
        f = ceil(R / wj)
        fj = <double> (j + 1)
        if f < fj:
            f = fj
        tot = R / f * (f - <double> j)
        if tot < best:
            best = tot
            bestf = f
            bestj = j
    return best, R / bestf, <Py_ssize_t> (bestf - <double> bestj), bestj


cdef double _loo_multibid_total(const double[::1] v, Py_ssize_t n, Py_ssize_t i,
                                double R, Py_ssize_t kw) nogil:
    # verified split-bid total against v-without-index-i
    cdef Py_ssize_t m = n - 1
    cdef double best = INFINITY, bestf = 0.0, f, fj, tot, wj, b
    cdef Py_ssize_t j, bestj = 0, u
    for j in range(kw, m + 1):
        wj = v[j - 1] if j - 1 < i else v[j]
        f = ceil(R / wj)
        fj = <double> (j + 1)
        if f < fj:
            f = fj
        tot = R / f * (f - <double> j)
        if tot < best:
            best = tot
            bestf = f
            bestj = j
    b = R / bestf
    u = <Py_ssize_t> (bestf - <double> bestj)
    while _insert_price_skip(v, n, i, b, u) > b:
        b = nextafter(b, INFINITY)
    return b * <double> u


cdef inline bint _feasible(const double[::1] w, Py_ssize_t m, const double[::1] pm,
                           const double[::1] v1, const double[::1] sm, double b) nogil:
    # is a single bid b accepted against w? (prefix/suffix peak tables)
    cdef Py_ssize_t j = _rank_of(w, m, b)
    cdef double m1 = pm[j]
    cdef double m2 = (<double> (j + 1)) * b
    cdef double m3 = sm[j + 1]
    return m2 >= m1 or m3 >= m1 or v1[j] == b


cdef double _loo_strategic(const double[::1] v, Py_ssize_t n, Py_ssize_t i,
                           double[::1] wbuf, double[::1] pm, double[::1] v1,
                           double[::1] sm) nogil:
    # minimal accepted single bid against v-without-index-i
    cdef Py_ssize_t m = n - 1, t
    for t in range(i):
        wbuf[t] = v[t]
    for t in range(i, m):
        wbuf[t] = v[t + 1]

    cdef double R = 0.0, term
    cdef Py_ssize_t ks = 0
    pm[0] = 0.0
    v1[0] = -1.0
    for t in range(1, m + 1):
        term = (<double> t) * wbuf[t - 1]
        if term >= pm[t - 1]:
            pm[t] = term
            v1[t] = wbuf[t - 1]
            R = term
            ks = t
        else:
            pm[t] = pm[t - 1]
            v1[t] = v1[t - 1]
    sm[m + 1] = 0.0
    for t in range(m, 0, -1):
        term = (<double> (t + 1)) * wbuf[t - 1]
        sm[t] = term if term > sm[t + 1] else sm[t + 1]

    # merge the two ascending candidate streams: R/m' (m' descending) and wbuf
    cdef Py_ssize_t mi = m + 1          # m' runs m+1 down to ks+1
    cdef Py_ssize_t wi = m - 1          # wbuf index, ascending values
    cdef double cand, other, b
    while mi >= ks + 1 or wi >= 0:
        if mi >= ks + 1 and wi >= 0:
            cand = R / (<double> mi)
            other = wbuf[wi]
            if cand <= other:
                mi -= 1
            else:
                cand = other
                wi -= 1
        elif mi >= ks + 1:
            cand = R / (<double> mi)
            mi -= 1
        else:
            cand = wbuf[wi]
            wi -= 1
        b = cand
        if _feasible(wbuf, m, pm, v1, sm, b):
            return b
        b = nextafter(b, INFINITY)
        if _feasible(wbuf, m, pm, v1, sm, b):
            return b
    return wbuf[0]  # unreachable: the top bid is always accepted


def delta_sweep(const double[::1] values, const long long[::1] eval_idx, int mode):
    """Discount ratio per requested index; mode 0 single, 1 split bids."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t nidx = eval_idx.shape[0]
    out_arr = np.empty(nidx, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double rev
    cdef Py_ssize_t kfull
    rev, kfull = _scan(values, n)
    cdef double p_honest = values[kfull - 1]

    cdef double[::1] pre_val, suf_val, pm, v1, sm, wbuf
    cdef long long[::1] pre_rank, suf_rank
    cdef Py_ssize_t t, i, s, kw
    cdef double R, total, term, vi

    if mode == 1:
        pre_val_arr = np.empty(n + 1, dtype=np.float64)
        pre_rank_arr = np.empty(n + 1, dtype=np.int64)
        suf_val_arr = np.empty(n + 2, dtype=np.float64)
        suf_rank_arr = np.empty(n + 2, dtype=np.int64)
        pre_val = pre_val_arr
        pre_rank = pre_rank_arr
        suf_val = suf_val_arr
        suf_rank = suf_rank_arr
        with nogil:
            pre_val[0] = 0.0
            pre_rank[0] = 0
            for t in range(1, n + 1):
                term = (<double> t) * values[t - 1]
                if term >= pre_val[t - 1]:
                    pre_val[t] = term
                    pre_rank[t] = t
                else:
                    pre_val[t] = pre_val[t - 1]
                    pre_rank[t] = pre_rank[t - 1]
            suf_val[n] = 0.0
            suf_rank[n] = 0
            for s in range(n - 1, 0, -1):
                term = (<double> s) * values[s]
                if term > suf_val[s + 1]:
                    suf_val[s] = term
                    suf_rank[s] = s
                else:
                    suf_val[s] = suf_val[s + 1]
                    suf_rank[s] = suf_rank[s + 1]
            for t in range(nidx):
                i = <Py_ssize_t> eval_idx[t]
                if suf_val[i + 1] >= pre_val[i]:
                    R = suf_val[i + 1]
                    kw = <Py_ssize_t> suf_rank[i + 1]
                else:
                    R = pre_val[i]
                    kw = <Py_ssize_t> pre_rank[i]
                total = _loo_multibid_total(values, n, i, R, kw)
                vi = values[i]
                out[t] = 0.0 if vi < total else 1.0 - total / p_honest
    else:
        wbuf_arr = np.empty(n, dtype=np.float64)
        pm_arr = np.empty(n + 2, dtype=np.float64)
        v1_arr = np.empty(n + 2, dtype=np.float64)
        sm_arr = np.empty(n + 3, dtype=np.float64)
        wbuf = wbuf_arr
        pm = pm_arr
        v1 = v1_arr
        sm = sm_arr
        with nogil:
            for t in range(nidx):
                i = <Py_ssize_t> eval_idx[t]
                total = _loo_strategic(values, n, i, wbuf, pm, v1, sm)
                vi = values[i]
                out[t] = 0.0 if vi < total else 1.0 - total / p_honest
    return out_arr


def rsop_eval(const double[::1] values, const unsigned char[::1] labels):
    """(p_a, p_b, winners_a, winners_b, revenue) for one A/B assignment."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t ca = 0, cb = 0, wa = 0, wb = 0, t
    cdef double ra = 0.0, rb = 0.0, pa = 0.0, pb = 0.0, r, revenue
    with nogil:
        for t in range(n):
            if labels[t]:
                ca += 1
                r = (<double> ca) * values[t]
                if r >= ra:
                    ra = r
                    pa = values[t]
            else:
                cb += 1
                r = (<double> cb) * values[t]
                if r >= rb:
                    rb = r
                    pb = values[t]
        for t in range(n):
            if labels[t]:
                if values[t] >= pb:
                    wa += 1
            else:
                if values[t] >= pa:
                    wb += 1
        revenue = (<double> wa) * pb + (<double> wb) * pa
    return pa, pb, wa, wb, revenue


def rsop_all_partitions(const double[::1] values):
    """Revenue for every one of the 2^n A/B assignments (mask bit t -> A)."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t total = 1 << n
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t mask, t, ca, cb, wa, wb
    cdef double ra, rb, pa, pb, r
    with nogil:
        for mask in range(total):
            ca = 0
            cb = 0
            ra = 0.0
            rb = 0.0
            pa = 0.0
            pb = 0.0
            for t in range(n):
                if (mask >> t) & 1:
                    ca += 1
                    r = (<double> ca) * values[t]
                    if r >= ra:
                        ra = r
                        pa = values[t]
                else:
                    cb += 1
                    r = (<double> cb) * values[t]
                    if r >= rb:
                        rb = r
                        pb = values[t]
            wa = 0
            wb = 0
            for t in range(n):
                if (mask >> t) & 1:
                    if values[t] >= pb:
                        wa += 1
                else:
                    if values[t] >= pa:
                        wb += 1
            out[mask] = (<double> wa) * pb + (<double> wb) * pa
    return out_arr
