"""Pure-Python/numpy kernel backend.

Coefficients are ascending-power float sequences, matching the compiled
backend in ``_cext.pyx``.
"""

import numpy as np

BACKEND_NAME = "python"


def polyval(coeffs, x):
    """Horner evaluation of an ascending-power polynomial at a scalar."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def polyval_grid(coeffs, xs):
    """Evaluate the polynomial on an array of points."""
    xs = np.asarray(xs, dtype=float)
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc *= xs
        acc += c
    return acc


def bisect_root(coeffs, lo, hi, tol=1e-13, maxit=200):
    """Refine a sign-change bracket [lo, hi] by bisection.

    The bracket is assumed certified by the caller (exact isolation);
    this only polishes the endpoint to ``tol``.
    """
    flo = polyval(coeffs, lo)
    if flo == 0.0:
        return lo
    fhi = polyval(coeffs, hi)
    if fhi == 0.0:
        return hi
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol or mid == lo or mid == hi:
            return mid
        fmid = polyval(coeffs, mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def grid_min(coeffs, lo, hi, n):
    """Minimum of the polynomial over an n-point uniform grid on [lo, hi].

    Returns ``(argmin, min)``. Heuristic only; certified minima go through
    the exact root-isolation path.
    """
    xs = np.linspace(lo, hi, int(n))
    vals = polyval_grid(coeffs, xs)
    i = int(np.argmin(vals))
    return float(xs[i]), float(vals[i])
