"""Benchmark the compiled kernel backend against the numpy fallback.

Runs each kernel (polyval, polyval_grid, bisect_root, grid_min) through
both backends on identical inputs, reports per-call timings and the
speedup, and cross-checks that the two backends agree numerically.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import sys
import time

import numpy as np


def load_backends():
    from reebsys.kernels import _numpy as py_backend

    try:
        from reebsys.kernels import _cext as c_backend
    except ImportError:
        c_backend = None
    return py_backend, c_backend


def bench(fn, args, repeat, inner):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            out = fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    args = ap.parse_args()

    py, cx = load_backends()
    if cx is None:
        print("compiled backend unavailable; nothing to compare", file=sys.stderr)
        return 1

    rng = np.random.default_rng(0)
    coeffs = list(rng.normal(size=6))
    grid = np.linspace(-1.0, 1.0, 100_000)
    # a polynomial with a guaranteed sign change on [0, 2]
    root_coeffs = [-1.0, 0.0, 1.0]

    cases = [
        ("polyval", (coeffs, 0.37), 20_000),
        ("polyval_grid", (coeffs, grid), 50),
        ("bisect_root", (root_coeffs, 0.0, 2.0), 5_000),
        ("grid_min", (coeffs, -1.0, 1.0, 10_000), 200),
    ]

    print(f"{'kernel':<14} {'python':>12} {'cython':>12} {'speedup':>9}")
    for name, call_args, inner in cases:
        t_py, out_py = bench(getattr(py, name), call_args, args.repeat, inner)
        t_cx, out_cx = bench(getattr(cx, name), call_args, args.repeat, inner)
        a, b = np.asarray(out_py, dtype=float), np.asarray(out_cx, dtype=float)
        if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
            print(f"{name}: backend disagreement", file=sys.stderr)
            return 1
        print(f"{name:<14} {t_py * 1e6:>10.2f}us {t_cx * 1e6:>10.2f}us "
              f"{t_py / t_cx:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
