#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from feemarket import _kernels_py as kpy
from feemarket import prng

try:
    from feemarket import _kernels as kc
except ImportError:
    kc = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, make_args, call, repeat):
    args = make_args()
    t_py = timeit(lambda: call(kpy, *args), repeat)
    line = f"{name:38s} python {t_py * 1e3:9.2f} ms"
    if kc is not None:
        t_c = timeit(lambda: call(kc, *args), repeat)
        line += f"   compiled {t_c * 1e3:9.2f} ms   speedup {t_py / t_c:6.1f}x"
    print(line)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kc is None:
        print("compiled extension not available; timing the fallback only")

    sorted_desc = lambda seed, n: np.ascontiguousarray(np.sort(prng.uniforms(seed, n))[::-1])

    big = sorted_desc(1, 1_000_000)
    bench("monopolistic scan, n=1e6", lambda: (big,), lambda k, v: k.mono_scan(v), args.repeat)

    mid = sorted_desc(2, 4096)
    idx = np.arange(4096, dtype=np.int64)
    bench(
        "discount sweep (split bids), n=4096",
        lambda: (mid, idx),
        lambda k, v, i: k.delta_sweep(v, i, 1),
        args.repeat,
    )
    small_n = sorted_desc(4, 1024)
    sub = np.arange(0, 1024, 16, dtype=np.int64)
    bench(
        "discount sweep (single bid), n=1024/16",
        lambda: (small_n, sub),
        lambda k, v, i: k.delta_sweep(v, i, 0),
        args.repeat,
    )

    small = sorted_desc(3, 14)
    bench(
        "all 2^14 partitions, n=14",
        lambda: (small,),
        lambda k, v: k.rsop_all_partitions(v),
        args.repeat,
    )

    labels = prng.bits(7, 1_000_000)
    bench(
        "rsop pricing, n=1e6",
        lambda: (big, labels),
        lambda k, v, l: k.rsop_eval(v, l),
        args.repeat,
    )


if __name__ == "__main__":
    main()
