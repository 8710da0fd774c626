"""Time the compiled kernels against the vectorized fallback.

Runs the three kernel entry points on random inputs over a prime field and
prints one row per case: numpy time, numba time, speedup. Each timing is the
best of --repeats runs; the numba backend gets an untimed warm-up call first
so JIT compilation stays out of the numbers.

Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --p 65521 --repeats 5
"""

import argparse
import time

import numpy as np

from jplt import kernels_numpy

try:
    from jplt import kernels_numba
except ImportError:
    kernels_numba = None


def best_of(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(p, rng):
    def mat(rows, cols):
        return rng.integers(p, size=(rows, cols), dtype=np.int64)

    for n in (32, 128, 256):
        yield f"mat_mul {n}x{n}", "mat_mul", (mat(n, n), mat(n, n), p)
    for rows, cols in ((64, 128), (128, 256)):
        yield f"rref {rows}x{cols}", "rref", (mat(rows, cols), p)
    for rows, cols in ((4, 12), (5, 14), (4, 18)):
        yield (f"all_minors {rows}x{cols}", "all_minors_nonsingular",
               (mat(rows, cols), p))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=65537,
                    help="prime modulus (default 65537)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"p = {args.p}, best of {args.repeats}")
    print(f"{'case':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, name, call_args in cases(args.p, rng):
        t_np = best_of(getattr(kernels_numpy, name), call_args, args.repeats)
        if kernels_numba is None:
            print(f"{label:<20} {t_np:>9.4f}s {'n/a':>10} {'-':>8}")
            continue
        fn = getattr(kernels_numba, name)
        fn(*call_args)  # warm up the JIT
        t_nb = best_of(fn, call_args, args.repeats)
        ratio = t_np / t_nb if t_nb > 0 else float("inf")
        print(f"{label:<20} {t_np:>9.4f}s {t_nb:>9.4f}s {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
