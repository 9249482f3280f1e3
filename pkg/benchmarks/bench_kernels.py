"""Benchmark the hot kernels: numba-jitted loops versus the pure-numpy
fallback.

Run:  python benchmarks/bench_kernels.py

The numbers justify the default backend choice; correctness is identical
by construction (the test suite asserts bit-for-bit equality).
"""

import time

import numpy as np

from betabounds import kernels
from betabounds.certify import ConvexityClass, certify
from betabounds.dsl import Interval, parse


def timeit(fn, *args, repeat=20):
    fn(*args)  # warm up (includes jit compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def jitted_variants():
    try:
        from numba import njit
    except ImportError:
        return None
    return {
        "tridiag_eigen": njit(cache=True)(kernels.tridiag_eigen_py),
        "scan_grid": njit(cache=True)(kernels.scan_grid_py),
        "scan_points": njit(cache=True)(kernels.scan_points_py),
    }


def bench_tridiag(jitted):
    rng = np.random.default_rng(0)
    print("\ntridiag_eigen (implicit-shift QL, Golub-Welsch core)")
    print(f"{'m':>6} {'numpy/python':>14} {'numba':>14} {'speedup':>9}")
    for m in (20, 50, 100, 200):
        d = rng.normal(size=m)
        e = rng.normal(size=m - 1)

        def run_py():
            z = np.zeros(m)
            z[0] = 1.0
            kernels.tridiag_eigen_py(d.copy(), e.copy(), z)

        t_py = timeit(run_py)
        if jitted:
            fn = jitted["tridiag_eigen"]

            def run_nb():
                z = np.zeros(m)
                z[0] = 1.0
                fn(d.copy(), e.copy(), z)

            t_nb = timeit(run_nb)
            print(f"{m:>6} {t_py * 1e3:>12.3f}ms {t_nb * 1e3:>12.3f}ms "
                  f"{t_py / t_nb:>8.1f}x")
        else:
            print(f"{m:>6} {t_py * 1e3:>12.3f}ms {'n/a':>14} {'':>9}")


def bench_scans(jitted):
    rng = np.random.default_rng(1)
    print("\nscan_grid (certifier counterexample search, 64x64x33 default)")
    print(f"{'grid':>12} {'numpy':>14} {'numba':>14} {'speedup':>9}")
    for n, nt in ((32, 17), (64, 33), (128, 65)):
        fx = rng.normal(size=n)
        fy = rng.normal(size=n)
        ts = np.linspace(0.0, 1.0, nt)
        fmid = rng.normal(size=n * n * nt)
        t_np = timeit(kernels.scan_grid_numpy, fx, fy, fmid, ts, 1, 1e-9)
        if jitted:
            t_nb = timeit(jitted["scan_grid"], fx, fy, fmid, ts, 1, 1e-9)
            print(f"{n:>4}x{n}x{nt:<3} {t_np * 1e3:>12.3f}ms {t_nb * 1e3:>12.3f}ms "
                  f"{t_np / t_nb:>8.1f}x")
        else:
            print(f"{n:>4}x{n}x{nt:<3} {t_np * 1e3:>12.3f}ms {'n/a':>14}")

    print("\nscan_points (random-triple pass, 10k default)")
    n = 10000
    fx, fy, fmid = rng.normal(size=(3, n))
    ts = rng.random(n)
    t_np = timeit(kernels.scan_points_numpy, fx, fy, fmid, ts, 2, 1e-9)
    line = f"{'10k':>12} {t_np * 1e3:>12.3f}ms"
    if jitted:
        t_nb = timeit(jitted["scan_points"], fx, fy, fmid, ts, 2, 1e-9)
        line += f" {t_nb * 1e3:>12.3f}ms {t_np / t_nb:>8.1f}x"
    print(line)


def bench_end_to_end():
    print(f"\nend-to-end certify under the selected backend ({kernels.BACKEND})")
    f = parse("exp(-36*(x - 0.25)^2) + exp(-36*(x - 0.75)^2)")
    interval = Interval(0.0, 1.0)

    def run():
        certify(f, interval, ConvexityClass.QUASI_CONVEX)

    t = timeit(run, repeat=10)
    print(f"  default resolution (64x64x33 + 10k random): {t * 1e3:.1f} ms")


def main():
    print(f"selected backend: {kernels.BACKEND}")
    jitted = jitted_variants()
    if jitted is None:
        print("numba not installed; showing the numpy path only")
    bench_tridiag(jitted)
    bench_scans(jitted)
    bench_end_to_end()


if __name__ == "__main__":
    main()
