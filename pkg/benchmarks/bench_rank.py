"""Compare the compiled and pure-numpy rank kernels.

Usage: python benchmarks/bench_rank.py [--batch 100000] [--repeat 3]
Times batched rank computation over a few (q, n) shapes and prints the
throughput of each implementation plus the speedup.
"""

import argparse
import time

import numpy as np

from rankmetric.gf import build_context
from rankmetric.kernels import IMPLEMENTATION, rank_batch, rank_batch_python


def bench(fn, mats, tables, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(mats, *tables)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    shapes = [(2, 1, 5), (3, 1, 7), (5, 1, 8), (2, 2, 8)]
    print(f"compiled kernel available: {IMPLEMENTATION == 'cython'}")
    print(f"{'p^e, n':>10} {'batch':>8} {'numpy':>10} {'compiled':>10} "
          f"{'speedup':>8}")
    rng = np.random.default_rng(0)
    for p, e, n in shapes:
        ctx = build_context(p, e, n)
        mats = rng.integers(0, ctx.q, size=(args.batch, n, n),
                            dtype=np.int64).astype(np.uint8)
        tables = (ctx.fq_add, ctx.fq_mul, ctx.fq_inv, ctx.fq_neg)
        t_py, out_py = bench(rank_batch_python, mats, tables, args.repeat)
        t_cy, out_cy = bench(rank_batch, mats, tables, args.repeat)
        assert (out_py == out_cy).all(), "kernel outputs disagree"
        label = f"{p}^{e}, {n}"
        print(f"{label:>10} {args.batch:>8} {t_py:>9.3f}s {t_cy:>9.3f}s "
              f"{t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
