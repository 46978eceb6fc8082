"""Timing comparison of the compiled enumeration kernel against the pure
Python fallback.

Both kernels get byte-identical arguments and their result dictionaries are
compared for equality before any timing is reported, so a speedup is only
printed for matching outputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
from fractions import Fraction

from cutfair import oracle
from cutfair.instances import gen_fig3, gen_random_graph
from cutfair.oracle._kernel import EF1, KERNEL_NAME, NONEMPTY, TS, WTS, scan, scan_python


def cases():
    yield "fig3:d=3 n=3 ef1+ts", gen_fig3(3).graph, 3, EF1 | TS
    yield "fig3:d=5 n=3 ef1+wts", gen_fig3(5).graph, 3, EF1 | WTS
    g = gen_random_graph(10, 0.4, 7).graph
    yield "random:10 n=3 ef1", g, 3, EF1 | NONEMPTY
    g = gen_random_graph(12, 0.3, 11).graph
    yield "random:12 n=2 ts", g, 2, TS


def run(kernel, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return result, best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args()
    print(f"active kernel: {KERNEL_NAME}")
    print(f"{'case':30s} {'states':>9s} {'compiled_ms':>12s} {'python_ms':>10s} {'speedup':>8s}")
    for name, g, n, mask in cases():
        fixed = [-1] * g.num_vertices
        states = n ** g.num_vertices
        args = oracle._scan_args(g, n, fixed, mask, Fraction(1), False, False, 0, states)
        fast, t_fast = run(scan, args, opts.repeat)
        slow, t_slow = run(scan_python, args, opts.repeat)
        if fast != slow:
            raise SystemExit(f"kernel outputs diverge on {name}: {fast} != {slow}")
        speedup = t_slow / t_fast if t_fast > 0 else float("inf")
        print(
            f"{name:30s} {states:9d} {1000 * t_fast:12.2f} {1000 * t_slow:10.2f} {speedup:7.1f}x"
        )


if __name__ == "__main__":
    main()
