#!/usr/bin/env python3
"""Benchmark the compiled sampler kernel against the pure-Python one.

Both kernels consume the identical Philox stream, so outputs agree
draw for draw; only throughput differs.  Typical result on one core:
the compiled kernel runs two to three orders of magnitude faster.

Usage:
    python benchmarks/bench_sampler.py [--r 3] [--m 4] [--samples 20000]
"""

import argparse
import time

from fracdecomp import _sampler_py
from fracdecomp.graph import complete_graph
from fracdecomp.kernels import adjacency_words

try:
    from fracdecomp import _sampler as compiled
except ImportError:
    compiled = None


def run(kernel, adj_arg, n, r, m, samples, seed):
    start = time.perf_counter()
    result = kernel.batch_stats(adj_arg, n, r, m, seed, 0, samples)
    elapsed = time.perf_counter() - start
    return elapsed, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--r", type=int, default=3)
    parser.add_argument("--m", type=int, default=4)
    parser.add_argument("--samples", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args()

    n = 2 * args.r * args.m
    g = complete_graph(n)
    print(f"host: complete graph on {n} vertices, r={args.r}, m={args.m}, "
          f"samples={args.samples}")

    t_pure, pure = run(
        _sampler_py, list(g._adj), n, args.r, args.m, args.samples, args.seed
    )
    print(f"pure python : {t_pure:8.3f} s  "
          f"({args.samples / t_pure:,.0f} samples/s)")

    if compiled is None:
        print("compiled    : extension not built (pip install -e . rebuilds it)")
        return

    t_comp, comp = run(
        compiled, adjacency_words(g), n, args.r, args.m, args.samples, args.seed
    )
    print(f"compiled    : {t_comp:8.3f} s  "
          f"({args.samples / t_comp:,.0f} samples/s)")
    print(f"speedup     : {t_pure / t_comp:8.1f}x")

    same = (
        list(pure[0]) == list(comp[0].tolist())
        and tuple(pure[1:]) == (int(comp[1]), int(comp[2]), int(comp[3]), int(comp[4]))
    )
    print(f"outputs identical: {same}")
    if not same:
        raise SystemExit("kernel outputs diverged; the backends are out of sync")


if __name__ == "__main__":
    main()
