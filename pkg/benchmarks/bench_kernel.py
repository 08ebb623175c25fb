"""Benchmark: compiled coefficient kernel vs the pure-Python twin.

Runs the quartic-family denominator workload (the package's hot loop) at a
few truncations and reports wall time per kernel plus the speedup.  Results
are checked for equality before timing is reported.

Usage:  python benchmarks/bench_kernel.py [--trunc 30] [--repeat 1]
"""

import argparse
import sys
import time

from hodgeloci.periods import (HAVE_COMPILED_KERNEL, FamilySpec, griffiths_basis,
                               period_series)

QUARTIC_I4 = ((1, 3, 0, 0), (0, 1, 3, 0), (0, 0, 1, 3), (3, 0, 0, 1))


def run_table(trunc: int, kernel: str):
    fam = FamilySpec(2, 4, QUARTIC_I4, trunc)
    return [period_series(b, fam, kernel=kernel).series for b in griffiths_basis(4, 2)]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--trunc", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    if not HAVE_COMPILED_KERNEL:
        print("compiled kernel not built (python setup.py build_ext --inplace); "
              "timing the pure kernel only")

    print(f"{'trunc':>6} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>8}")
    for trunc in (10, 20, args.trunc):
        t0 = time.perf_counter()
        for _ in range(args.repeat):
            pure = run_table(trunc, "py")
        t_pure = (time.perf_counter() - t0) / args.repeat

        if HAVE_COMPILED_KERNEL:
            t0 = time.perf_counter()
            for _ in range(args.repeat):
                compiled = run_table(trunc, "c")
            t_comp = (time.perf_counter() - t0) / args.repeat
            if compiled != pure:
                print("kernel outputs differ!", file=sys.stderr)
                return 1
            print(f"{trunc:>6} {t_pure:>10.3f} {t_comp:>13.3f} {t_pure / t_comp:>7.1f}x")
        else:
            print(f"{trunc:>6} {t_pure:>10.3f} {'-':>13} {'-':>8}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
