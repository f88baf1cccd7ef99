"""Timing comparison of the compiled and plain kernel paths.

Both implementations ship in respchain._kernels; this script times them
side by side on the same inputs so the speedup of the compiled path (and
the cost of losing it) is a number, not folklore. The compiled column
needs numba importable and not disabled via RESPCHAIN_NO_NUMBA.

    python benchmarks/bench_kernels.py --length 2000000
"""

import argparse
import time

import numpy as np

from respchain import _kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(
        description="compare the numba and numpy kernel paths"
    )
    parser.add_argument("--length", type=int, default=1_000_000,
                        help="sequence length (default 1e6)")
    parser.add_argument("--states", type=int, default=5,
                        help="number of states (default 5)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="take the best of this many runs (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = rng.dirichlet(np.ones(args.states), size=args.states)
    cum_rows = np.cumsum(rows, axis=1)
    uniforms = rng.random(args.length - 1)
    states = _kernels._walk_numpy(cum_rows, 1, uniforms)

    jobs = [
        ("walk", lambda k: k(cum_rows, 1, uniforms),
         getattr(_kernels, "_walk_nb", None), _kernels._walk_numpy),
        ("pair_counts", lambda k: k(states, args.states),
         getattr(_kernels, "_pair_counts_nb", None), _kernels._pair_counts_numpy),
    ]

    print(f"length {args.length:,}, {args.states} states, "
          f"best of {args.repeats} runs")
    print(f"{'kernel':<12} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, call, compiled, plain in jobs:
        plain_s = best_of(lambda: call(plain), args.repeats)
        if compiled is None:
            print(f"{name:<12} {plain_s * 1e3:>8.1f}ms {'-':>10} {'-':>8}")
            continue
        call(compiled)  # compile before timing
        compiled_s = best_of(lambda: call(compiled), args.repeats)
        print(f"{name:<12} {plain_s * 1e3:>8.1f}ms {compiled_s * 1e3:>8.1f}ms "
              f"{plain_s / compiled_s:>7.1f}x")
    if not _kernels.HAS_NUMBA:
        print("(compiled path unavailable: numba missing or disabled)")


if __name__ == "__main__":
    main()
