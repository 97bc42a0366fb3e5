"""Compare the numba and numpy paths of the dense kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--t-window 120]

The numba path is timed after one warm-up call so that JIT compilation is
not counted.  Both paths must agree exactly; the script exits 1 otherwise.
"""
import argparse
import sys
import time

import numpy as np

from abeltoric import _kernels
from abeltoric.theta import ThetaMatrix


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--s-cut", type=int, default=8)
    ap.add_argument("--t-window", type=int, default=120)
    ap.add_argument("--nu-max", type=int, default=20000)
    ap.add_argument("--kappa-max", type=int, default=200)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; nothing to compare")
        return 0

    mat = ThetaMatrix.build(args.s_cut, args.t_window)
    a = mat.entries[0][0].to_dense(args.t_window)
    b = mat.entries[3][1].to_dense(args.t_window)

    cases = {
        "series_mul": lambda be: _kernels.series_mul(a, b, be),
        "divisibility_grid": lambda be: _kernels.divisibility_grid(args.nu_max, args.kappa_max, be),
    }
    ok = True
    print(f"{'kernel':<20} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")
    for name, fn in cases.items():
        ref = fn("numpy")
        got = fn("numba")  # warm-up and correctness
        if not np.array_equal(ref, got):
            print(f"{name}: backends disagree")
            ok = False
            continue
        t_np = best_of(lambda: fn("numpy"), args.repeat)
        t_nb = best_of(lambda: fn("numba"), args.repeat)
        print(f"{name:<20} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.2f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
