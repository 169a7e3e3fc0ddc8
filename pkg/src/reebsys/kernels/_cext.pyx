# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: Horner evaluation and bisection refinement."""

import numpy as np

BACKEND_NAME = "cython"


cdef double _horner(double[::1] c, double x) noexcept nogil:
    cdef Py_ssize_t i = c.shape[0] - 1
    cdef double acc = 0.0
    while i >= 0:
        acc = acc * x + c[i]
        i -= 1
    return acc


def polyval(coeffs, double x):
    """Horner evaluation of an ascending-power polynomial at a scalar."""
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    return _horner(c, x)


def polyval_grid(coeffs, xs):
    """Evaluate the polynomial on an array of points."""
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    out_arr = np.empty(len(xs), dtype=np.float64)
    cdef double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(x.shape[0]):
            out[i] = _horner(c, x[i])
    return out_arr


def bisect_root(coeffs, double lo, double hi, double tol=1e-13, int maxit=200):
    """Refine a sign-change bracket [lo, hi] by bisection."""
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double flo = _horner(c, lo)
    if flo == 0.0:
        return lo
    cdef double fhi = _horner(c, hi)
    if fhi == 0.0:
        return hi
    cdef double mid, fmid
    cdef int it
    for it in range(maxit):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol or mid == lo or mid == hi:
            return mid
        fmid = _horner(c, mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo = mid
            flo = fmid
    return 0.5 * (lo + hi)


def grid_min(coeffs, double lo, double hi, Py_ssize_t n):
    """Minimum of the polynomial over an n-point uniform grid on [lo, hi]."""
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double step = (hi - lo) / (n - 1) if n > 1 else 0.0
    cdef double best_x = lo
    cdef double best_v = _horner(c, lo)
    cdef double x, v
    cdef Py_ssize_t i
    with nogil:
        for i in range(1, n):
            x = lo + step * i
            v = _horner(c, x)
            if v < best_v:
                best_v = v
                best_x = x
    return best_x, best_v
