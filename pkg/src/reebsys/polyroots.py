"""Exact univariate polynomial arithmetic and certified real root isolation.

Polynomials are tuples of ``fractions.Fraction`` coefficients in ascending
powers. All decisions (root counts, sign of a value, positivity on an
interval) are made exactly over the rationals; floats only appear when a
root is *refined* for numeric output, which happens inside an already
certified isolating bracket.

Sturm chains are the workhorse: the potentials handled by this package
have small degree (<= 6 after the usual tau/slope transforms), where
exact Sturm sequences are cheap and complete.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .kernels import bisect_root as _bisect_float

Poly = tuple[Fraction, ...]

_ZERO = Fraction(0)


def as_poly(coeffs: Iterable) -> Poly:
    """Normalize arbitrary numeric coefficients to an exact polynomial.

    Floats are converted exactly (every float is a rational), so no
    information is lost. Trailing zero coefficients are stripped.
    """
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Poly) -> int:
    """Degree of p, with -1 for the zero polynomial."""
    return len(p) - 1


def is_zero(p: Poly) -> bool:
    return not p


def eval_at(p: Poly, x: Fraction) -> Fraction:
    acc = _ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def eval_float(p: Poly, x: float) -> float:
    acc = 0.0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return as_poly(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, Fraction(-1)))


def scale(p: Poly, a) -> Poly:
    a = Fraction(a)
    return as_poly([c * a for c in p])


def shift_constant(p: Poly, a) -> Poly:
    """p(x) + a."""
    a = Fraction(a)
    if not p:
        return as_poly([a])
    return as_poly([p[0] + a, *p[1:]])


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return as_poly(out)


def deriv(p: Poly) -> Poly:
    return as_poly([i * c for i, c in enumerate(p)][1:])


def antideriv(p: Poly) -> Poly:
    return as_poly([_ZERO] + [c / (i + 1) for i, c in enumerate(p)])


def integrate(p: Poly, a, b) -> Fraction:
    """Exact definite integral of p over [a, b]."""
    big = antideriv(p)
    return eval_at(big, Fraction(b)) - eval_at(big, Fraction(a))


def compose_neg(p: Poly) -> Poly:
    """p(-x)."""
    return as_poly([c if i % 2 == 0 else -c for i, c in enumerate(p)])


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [_ZERO] * max(len(p) - len(q) + 1, 0)
    dq = degree(q)
    lc = q[-1]
    for i in range(len(rem) - 1, dq - 1, -1):
        coef = rem[i] / lc
        quo[i - dq] = coef
        if coef:
            for j in range(dq + 1):
                rem[i - dq + j] -= coef * q[j]
    return as_poly(quo), as_poly(rem)


def gcd_poly(p: Poly, q: Poly) -> Poly:
    a, b = p, q
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return ()
    return scale(a, 1 / a[-1])  # monic


def squarefree(p: Poly) -> Poly:
    """Square-free part of p (same real roots, all simple)."""
    if degree(p) <= 1:
        return p
    g = gcd_poly(p, deriv(p))
    if degree(g) <= 0:
        return p
    return divmod_poly(p, g)[0]


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, deriv(p)]
    while chain[-1]:
        r = divmod_poly(chain[-2], chain[-1])[1]
        chain.append(scale(r, -1))
    chain.pop()
    return chain


def _variations(chain: Sequence[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = eval_at(q, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: Sequence[Poly], a: Fraction, b: Fraction) -> int:
    """Number of distinct roots in (a, b]; requires chain of a nonzero poly."""
    return _variations(chain, a) - _variations(chain, b)


def isolate_roots(p: Poly, a, b, include_a: bool = False, include_b: bool = False):
    """Isolating intervals for the distinct real roots of p in (a, b).

    Returns a sorted list of ``(lo, hi)`` Fraction pairs, each containing
    exactly one root of p; a rational root detected exactly is returned as
    a degenerate ``(r, r)`` pair. Endpoints are excluded unless the
    corresponding ``include_*`` flag is set.

    Raises ValueError for the zero polynomial (every point is a root).
    """
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("empty interval")
    if is_zero(p):
        raise ValueError("cannot isolate roots of the zero polynomial")
    s = squarefree(p)
    if degree(s) <= 0:
        return []

    found: list[tuple[Fraction, Fraction]] = []
    # Peel off rational roots at the endpoints so the Sturm counts below
    # see a root-free boundary.
    for endpoint, included in ((a, include_a), (b, include_b)):
        if eval_at(s, endpoint) == 0:
            if included:
                found.append((endpoint, endpoint))
            s = divmod_poly(s, (-endpoint, Fraction(1)))[0]
    if degree(s) <= 0 or a == b:
        return sorted(found)

    chain = sturm_chain(s)
    stack = [(a, b, count_roots(chain, a, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            found.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if eval_at(s, mid) == 0:
            # Divide the hit root out and rebuild the chain, otherwise the
            # child intervals would count it again at their endpoint.
            found.append((mid, mid))
            s = divmod_poly(s, (-mid, Fraction(1)))[0]
            if degree(s) <= 0:
                continue
            chain = sturm_chain(s)
        left = count_roots(chain, lo, mid)
        right = count_roots(chain, mid, hi)
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))
    # Shrink brackets whose endpoint is a (peeled, excluded) root of the
    # original polynomial, so consumers bisecting p inside the bracket
    # cannot mistake that endpoint for the isolated root.
    out: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(found):
        if lo != hi and degree(s) >= 1:
            while eval_at(p, lo) == 0 or eval_at(p, hi) == 0:
                mid = (lo + hi) / 2
                if eval_at(s, mid) == 0:
                    lo = hi = mid
                    break
                if count_roots(chain, lo, mid) == 1:
                    hi = mid
                else:
                    lo = mid
        out.append((lo, hi))
    return out


def refine(p: Poly, lo: Fraction, hi: Fraction, tol: float = 1e-13) -> float:
    """Numeric root inside a certified isolating bracket.

    Fast path: double-precision bisection via the kernel backend. If the
    float signs at the bracket ends are unusable (underflow, huge
    coefficients), fall back to exact bisection.
    """
    if lo == hi:
        return float(lo)
    fl = eval_at(p, lo)
    fh = eval_at(p, hi)
    if fl == 0:
        return float(lo)
    if fh == 0:
        return float(hi)
    if (fl < 0) == (fh < 0):
        # Even-multiplicity root: bisect the square-free part instead,
        # which has the same root but crosses zero there.
        p = squarefree(p)
        fl, fh = eval_at(p, lo), eval_at(p, hi)
    cf = [float(c) for c in p]
    flo_f = eval_float(p, float(lo))
    fhi_f = eval_float(p, float(hi))
    if flo_f != 0.0 and fhi_f != 0.0 and (flo_f < 0) == (fl < 0) and (fhi_f < 0) == (fh < 0):
        return float(_bisect_float(cf, float(lo), float(hi), tol))
    return float(refine_exact(p, lo, hi, Fraction(tol).limit_denominator(10**18))[0])


def refine_exact(
    p: Poly, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating bracket below ``width`` by exact bisection."""
    if lo == hi:
        return lo, hi
    fl = eval_at(p, lo)
    if fl != 0 and (fl < 0) == (eval_at(p, hi) < 0):
        # even-multiplicity root: the square-free part crosses zero there
        p = squarefree(p)
        fl = eval_at(p, lo)
    # Fast path: locate the root in double precision, then certify a
    # narrow rational bracket around it with two exact sign checks. Any
    # failure falls through to plain exact bisection.
    if fl != 0 and hi - lo > 4 * width > 0:
        cf = [float(c) for c in p]
        flo_f, fhi_f = eval_float(p, float(lo)), eval_float(p, float(hi))
        if flo_f != 0.0 and fhi_f != 0.0 and (flo_f < 0) == (fl < 0) and (flo_f < 0) != (fhi_f < 0):
            r = Fraction(_bisect_float(cf, float(lo), float(hi), float(width) / 4))
            a, b = max(lo, r - width / 2), min(hi, r + width / 2)
            if lo < a < b < hi:
                fa, fb = eval_at(p, a), eval_at(p, b)
                if fa == 0:
                    return a, a
                if fb == 0:
                    return b, b
                if (fa < 0) == (fl < 0) and (fa < 0) != (fb < 0):
                    return a, b
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = eval_at(p, mid)
        if fm == 0:
            return mid, mid
        if (fl < 0) == (fm < 0):
            lo, fl = mid, fm
        else:
            hi = mid
    return lo, hi


def sign_at_root(p: Poly, h: Poly, lo: Fraction, hi: Fraction, max_iter: int = 2000) -> int:
    """Sign of h at the unique root of p in [lo, hi]: -1, 0 or +1.

    Decided exactly: the bracket is shrunk until h has no root in it (then
    any interior sample gives the sign), or until h and p are found to
    share the root (gcd test), in which case the sign is 0.
    """
    if is_zero(h):
        return 0
    if lo == hi:
        v = eval_at(h, lo)
        return 0 if v == 0 else (1 if v > 0 else -1)
    g = gcd_poly(squarefree(p), squarefree(h))
    if degree(g) >= 1 and isolate_roots(g, lo, hi, include_a=True, include_b=True):
        # p's root in this bracket is also a root of h.
        return 0
    hs = squarefree(h)
    chain = sturm_chain(hs)
    fl = eval_at(p, lo)
    if fl != 0 and eval_at(p, hi) != 0 and (fl < 0) == (eval_at(p, hi) < 0):
        # even-multiplicity root: bisect the square-free part of p
        p = squarefree(p)
        fl = eval_at(p, lo)
    for _ in range(max_iter):
        if eval_at(hs, lo) != 0 and eval_at(hs, hi) != 0 and count_roots(chain, lo, hi) == 0:
            v = eval_at(h, (lo + hi) / 2)
            return 1 if v > 0 else -1
        mid = (lo + hi) / 2
        fm = eval_at(p, mid)
        if fm == 0:
            v = eval_at(h, mid)
            return 0 if v == 0 else (1 if v > 0 else -1)
        if (fl < 0) == (fm < 0):
            lo, fl = mid, fm
        else:
            hi = mid
    raise RuntimeError("sign_at_root did not converge")


def min_max_brackets(
    p: Poly, a, b, width: Fraction = Fraction(1, 10**12)
) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Certified rational brackets for min and max of p on [a, b].

    Returns ``(min_lo, min_hi, max_lo, max_hi)`` with
    ``min_lo <= min p <= min_hi`` and similarly for the max. Candidate
    points are the endpoints plus the isolated roots of p'.
    """
    a, b = Fraction(a), Fraction(b)
    if not p:
        return _ZERO, _ZERO, _ZERO, _ZERO
    cands: list[tuple[Fraction, Fraction]] = [(a, a), (b, b)]
    d = deriv(p)
    if not is_zero(d) and degree(d) >= 1:
        cands.extend(isolate_roots(d, a, b))
    lo_bounds = []
    hi_bounds = []
    for clo, chi in cands:
        if clo == chi:
            v = eval_at(p, clo)
            lo_bounds.append((v, v))
            hi_bounds.append((v, v))
        else:
            rlo, rhi = refine_exact(d, clo, chi, width)
            # p is monotone outside the tiny refined bracket; bound p on it
            # by its values at the ends plus a derivative-based slack.
            v1, v2 = eval_at(p, rlo), eval_at(p, rhi)
            slack = _abs_bound(d, rlo, rhi) * (rhi - rlo)
            lo_bounds.append((min(v1, v2) - slack, min(v1, v2)))
            hi_bounds.append((max(v1, v2), max(v1, v2) + slack))
    min_lo = min(x for x, _ in lo_bounds)
    min_hi = min(x for _, x in lo_bounds)
    max_lo = max(x for x, _ in hi_bounds)
    max_hi = max(x for _, x in hi_bounds)
    return min_lo, min_hi, max_lo, max_hi


def _abs_bound(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    """Crude upper bound for |p| on [a, b]."""
    m = max(abs(a), abs(b), Fraction(1))
    return sum((abs(c) * m**i for i, c in enumerate(p)), _ZERO)


def nonneg_on(p: Poly, a, b) -> tuple[bool, Fraction | None]:
    """Exact check that p >= 0 on [a, b]; returns (ok, witness).

    Touching zero is allowed. The witness is a rational point with
    p(witness) < 0 when the check fails.
    """
    a, b = Fraction(a), Fraction(b)
    if is_zero(p):
        return True, None
    if a == b:
        v = eval_at(p, a)
        return (v >= 0), (None if v >= 0 else a)
    roots = isolate_roots(p, a, b, include_a=True, include_b=True)
    # Sample points covering every sign-constant region: the interval
    # endpoints, every bracket endpoint (never a root unless the bracket
    # is the degenerate root itself), and the midpoint of every gap
    # between consecutive points. p is sign-constant between its roots,
    # so one non-root sample per region decides it.
    pts = sorted({a, b, *(x for r in roots for x in r)})
    samples = list(pts)
    samples.extend((x + y) / 2 for x, y in zip(pts, pts[1:]) if x < y)
    for x in samples:
        if eval_at(p, x) < 0:
            return False, x
    return True, None


def positive_on_open(p: Poly, a, b) -> tuple[bool, Fraction | None]:
    """Exact check that p > 0 on the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        return True, None
    if is_zero(p):
        return False, (a + b) / 2
    mid = (a + b) / 2
    if eval_at(p, mid) <= 0:
        return False, mid
    roots = isolate_roots(p, a, b)
    if not roots:
        return True, None
    # Any root in the open interval kills strict positivity.
    witness = roots[0]
    w = (witness[0] + witness[1]) / 2
    return False, w


def simplest_between(lo, hi) -> Fraction:
    """The unique fraction of smallest denominator in the open interval.

    Stern-Brocot / continued-fraction descent; requires lo < hi.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("degenerate interval")
    return _simplest_open(lo, hi)


def _simplest_open(lo: Fraction, hi: Fraction) -> Fraction:
    if lo < 0 and hi > 0:
        return Fraction(0)
    if lo < 0:  # hi <= 0
        return -_simplest_open(-hi, -lo)
    # 0 <= lo < hi
    n = math.floor(lo) + 1
    if n < hi:
        return Fraction(n)
    a = math.floor(lo)
    if lo == a:
        # lo itself is an integer, excluded by openness; next simplest is
        # a + 1/m for the smallest m with a + 1/m < hi.
        m = math.floor(1 / (hi - a)) + 1
        return a + Fraction(1, m)
    return a + 1 / _simplest_open(1 / (hi - a), 1 / (lo - a))
