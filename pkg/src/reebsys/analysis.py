"""Verifiers and instance generators for the analytic lemma machinery.

Each verifier certifies the hypotheses of its statement before touching
the conclusion: a reported conclusion failure on an instance that
silently violates a hypothesis would be meaningless. All inequalities are
decided exactly (endpoint comparisons over the rationals, extrema located
by root isolation, signs at irrational extrema via sign_at_root).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import polyroots as pr
from . import potentials as pot
from .potentials import Potential


@dataclass(frozen=True)
class LemmaReport:
    hypothesis_ok: bool
    hypothesis_witnesses: tuple = ()
    conclusion_ok: Optional[bool] = None  # None when hypotheses fail
    conclusion_witnesses: tuple = ()
    extremal_margin: Optional[float] = None


def _require_domain(J: Potential, lo, hi, what: str):
    if J.exact_k_min != Fraction(lo) or J.exact_k_max != Fraction(hi):
        raise ValueError(f"{what} needs a potential on [{lo}, {hi}]")


def _max_below(J: Potential, transform, a, b, bound: Fraction):
    """Certify max of transform(piece) over [a, b] < bound, exactly.

    Returns (ok, margin, witness): margin is the smallest observed slack
    bound - value at the candidate extrema, witness the argmax when the
    bound fails.
    """
    a, b = Fraction(a), Fraction(b)
    best_margin = None
    witness = None
    ok = True
    for i, piece in enumerate(J.polys):
        lo = max(J.exact_breakpoints[i], a)
        hi = min(J.exact_breakpoints[i + 1], b)
        if lo > hi:
            continue
        p = transform(piece)
        h = pr.sub(pr.as_poly([bound]), p)  # bound - p, must stay > 0
        for x in (lo, hi):
            v = pr.eval_at(h, x)
            if v <= 0:
                ok = False
                witness = float(x)
            best_margin = _min_opt(best_margin, float(v))
        d = pr.deriv(p)
        if pr.degree(d) >= 1:
            for rlo, rhi in pr.isolate_roots(d, lo, hi):
                s = pr.sign_at_root(d, h, rlo, rhi)
                if s <= 0:
                    ok = False
                    witness = pr.refine(d, rlo, rhi)
                mid = (rlo + rhi) / 2
                best_margin = _min_opt(best_margin, float(pr.eval_at(h, mid)))
    return ok, best_margin, witness


def _min_opt(cur, v):
    return v if cur is None or v < cur else cur


def _abs_below(J: Potential, transform, a, b, bound: Fraction):
    """Certify max |transform| over [a, b] < bound."""
    ok1, m1, w1 = _max_below(J, transform, a, b, bound)
    ok2, m2, w2 = _max_below(J, lambda p: pr.scale(transform(p), -1), a, b, bound)
    margin = _min_opt(m1, m2) if (m1 is not None or m2 is not None) else None
    return ok1 and ok2, margin, w1 if not ok1 else w2


# -- Lemma: positivity of the return time bounds the function ----------


def verify_lemma_5_1(f: Potential) -> LemmaReport:
    """On [0, 1]: f >= 0 and f - x f' > 0 on (0,1) force x f(x) < 2 int f."""
    _require_domain(f, 0, 1, "verify_lemma_5_1")
    witnesses = []
    for i, piece in enumerate(f.polys):
        lo, hi = f.exact_breakpoints[i], f.exact_breakpoints[i + 1]
        ok, w = pr.nonneg_on(piece, lo, hi)
        if not ok:
            witnesses.append(("f<0", float(w)))
            break
    c1 = pot.check_C1(f)
    if not c1:
        witnesses.append(("tau<=0", c1.witness[0]))
    if witnesses:
        return LemmaReport(False, tuple(witnesses))
    integral = sum(
        (
            pr.integrate(p, f.exact_breakpoints[i], f.exact_breakpoints[i + 1])
            for i, p in enumerate(f.polys)
        ),
        Fraction(0),
    )
    ok, margin, w = _max_below(
        f, lambda p: pr.mul((Fraction(0), Fraction(1)), p), 0, 1, 2 * integral
    )
    return LemmaReport(
        True,
        conclusion_ok=ok,
        conclusion_witnesses=(() if ok else ((w,),)),
        extremal_margin=margin,
    )


# -- Lemma: the rational sieve pins the derivative ---------------------


def verify_lemma_5_2(f: Potential, a, b) -> LemmaReport:
    """On [0, 1/2]: period-floor sieve + |f - bx| < a on [1/4, 1/2]
    (with a < 1/20) force |f' - b| < 28a on [0, 1/4]."""
    _require_domain(f, 0, Fraction(1, 2), "verify_lemma_5_2")
    a = Fraction(a)
    b = Fraction(b)
    witnesses = []
    if not 0 < a < Fraction(1, 20):
        witnesses.append(("a-range", float(a)))
    ok_close, _, w_close = _abs_below(
        f,
        lambda p: pr.sub(p, (Fraction(0), b)),
        Fraction(1, 4),
        Fraction(1, 2),
        a,
    )
    if not ok_close:
        witnesses.append(("|f-bx|>=a", w_close))
    sieve = _sieve_hypothesis(f)
    if sieve is not None:
        witnesses.append(sieve)
    if witnesses:
        return LemmaReport(False, tuple(witnesses))
    ok, margin, w = _abs_below(
        f, lambda p: pr.sub(pr.deriv(p), (b,)), 0, Fraction(1, 4), 28 * a
    )
    return LemmaReport(
        True,
        conclusion_ok=ok,
        conclusion_witnesses=(() if ok else ((w,),)),
        extremal_margin=margin,
    )


def _sieve_hypothesis(f: Potential):
    """Check the period-floor sieve on the full domain of f.

    Every x with f'(x) = p/q must satisfy f(x) - x f'(x) >= 1/q. Complete
    because only q below 1 / min tau can violate; fails outright when the
    tau floor is not positive.
    """
    lo, hi = f.exact_k_min, f.exact_k_max
    tmin = pot.tau_min_lower_bound(f)
    if tmin <= 0:
        return ("tau-floor", float(tmin))
    q_cap = math.ceil(1 / tmin)
    if q_cap > 100_000:
        return ("tau-floor-too-small", float(tmin))
    for q in range(1, q_cap + 1):
        if Fraction(1, q) <= tmin:
            continue
        for level, p, sign in pot._slope_hits(f, q, lo, hi, Fraction(1, q)):
            if sign < 0:
                return ("sieve", (level, p, q))
    return None


# -- Proposition: C1-C3 bound the boundary sum by the volume -----------


def verify_prop_5_3(J: Potential) -> LemmaReport:
    """On [-1, 1]: C1 + C2 + C3 force |J(1) + J(-1)| < 224 int tau."""
    _require_domain(J, -1, 1, "verify_prop_5_3")
    witnesses = []
    c1 = pot.check_C1(J)
    if not c1:
        witnesses.append(("C1", c1.witness[0]))
    else:
        c2 = pot.check_C2(J)
        if not c2:
            witnesses.append(("C2", c2.witness))
        c3 = pot.check_C3(J)
        if not c3:
            witnesses.append(("C3", float(c3.value)))
    if witnesses:
        return LemmaReport(False, tuple(witnesses))
    boundary_sum = pr.eval_at(J.polys[-1], Fraction(1)) + pr.eval_at(
        J.polys[0], Fraction(-1)
    )
    integral = Fraction(pot.volume_contribution(J))
    lhs, rhs = abs(boundary_sum), 224 * integral
    ok = lhs < rhs
    return LemmaReport(
        True,
        conclusion_ok=ok,
        conclusion_witnesses=(() if ok else ((float(lhs), float(rhs)),)),
        extremal_margin=float(rhs - lhs),
    )


# -- rational sieve ----------------------------------------------------


def sieve_rational(interval: tuple) -> tuple[int, int]:
    """Simplest fraction strictly inside the interval.

    The returned p/q satisfies 1/q >= (hi - lo)/2 (pigeonhole: a grid of
    spacing below the length always meets the open interval). Requires
    0 < hi - lo < 1.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if not 0 < hi - lo < 1:
        raise ValueError(f"interval length must be in (0, 1), got {float(hi - lo)}")
    r = pr.simplest_between(lo, hi)
    return r.numerator, r.denominator


# -- instance generation -----------------------------------------------

PROFILES = ("C1-only", "C1+C2", "C1+C2+C3", "lemma-5.1", "lemma-5.2")

_FAREY_ORDER = 200  # slope gaps exclude rationals with q up to this


class GenerationError(RuntimeError):
    """The rejection sampler ran out of attempts."""


def generate_admissible(seed: int, profile: str, max_attempts: int = 200) -> Potential:
    """Random potential certified against the requested hypothesis set."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    rng = np.random.default_rng(seed)
    failures = []
    for attempt in range(max_attempts):
        try:
            if profile == "C1-only":
                J = _random_c1_potential(rng, -1, 1)
                if pot.check_C1(J):
                    return J
                failures.append("C1")
            elif profile == "lemma-5.1":
                J = _random_c1_potential(rng, 0, 1, nonneg=True)
                rep_ok = verify_lemma_5_1(J).hypothesis_ok
                if rep_ok:
                    return J
                failures.append("lemma-5.1 hypotheses")
            elif profile == "lemma-5.2":
                f, _, _ = generate_lemma_5_2_instance(seed + attempt)
                return f
            else:
                J = _farey_gap_potential(rng, -1, 1, tight_volume=(profile == "C1+C2+C3"))
                checks = [pot.check_C1(J), pot.check_C2(J)]
                if profile == "C1+C2+C3":
                    checks.append(pot.check_C3(J))
                if all(checks):
                    return J
                failures.append([not bool(c) for c in checks])
        except (pot.PotentialError, pot.DegeneratePotentialError) as exc:
            failures.append(repr(exc))
    raise GenerationError(
        f"profile {profile!r}: no admissible instance in {max_attempts} attempts; "
        f"last failures: {failures[-5:]}"
    )


def generate_lemma_5_2_instance(seed: int) -> tuple[Potential, Fraction, Fraction]:
    """A certified (f, a, b) triple for the derivative-pinning lemma.

    f is built with its slope range inside a Farey gap of order 200 and a
    return-time floor above 1/201, so the sieve hypothesis holds with no
    rational-slope levels at all; b is the gap center and a a certified
    bound on |f - bx| over [1/4, 1/2].
    """
    rng = np.random.default_rng(seed)
    for _ in range(50):
        f = _farey_gap_potential(rng, 0, Fraction(1, 2), tight_volume=False)
        b = _gap_center_of(f)
        # Certified bound on |f - bx| over [1/4, 1/2], nudged up 5%.
        dev = lambda p: pr.sub(p, (Fraction(0), b))  # noqa: E731
        hi1 = _sup_abs(f, dev, Fraction(1, 4), Fraction(1, 2))
        a = hi1 * Fraction(21, 20)
        if not 0 < a < Fraction(1, 20):
            continue
        report = verify_lemma_5_2(f, a, b)
        if report.hypothesis_ok:
            return f, a, b
    raise GenerationError(f"no lemma-5.2 instance from seed {seed}")


def _sup_abs(J: Potential, transform, a, b) -> Fraction:
    out = Fraction(0)
    for i, piece in enumerate(J.polys):
        lo = max(J.exact_breakpoints[i], a)
        hi = min(J.exact_breakpoints[i + 1], b)
        if lo > hi:
            continue
        mlo, _, _, mhi = pr.min_max_brackets(transform(piece), lo, hi)
        out = max(out, abs(mlo), abs(mhi))
    return out


def _rand_fraction(rng, lo: float, hi: float, den: int = 64) -> Fraction:
    return Fraction(int(round(rng.uniform(lo, hi) * den)), den)


def _random_c1_potential(rng, k_min, k_max, nonneg: bool = False) -> Potential:
    """Random piecewise polynomial, shifted up until tau (and f) clear 0."""
    k_min, k_max = Fraction(k_min), Fraction(k_max)
    n_pieces = int(rng.integers(1, 4))
    cuts = sorted(
        {k_min, k_max}
        | {
            k_min + (k_max - k_min) * Fraction(int(x), 16)
            for x in rng.integers(1, 16, size=n_pieces - 1)
        }
    )
    deg = int(rng.integers(1, 6))
    pieces = [pr.as_poly([_rand_fraction(rng, -1, 1) for _ in range(deg + 1)])]
    for b in cuts[1:-1]:
        prev = pieces[-1]
        val, slope = pr.eval_at(prev, b), pr.eval_at(pr.deriv(prev), b)
        # Continue with matching value and slope, fresh curvature.
        tail = [_rand_fraction(rng, -1, 1) for _ in range(max(deg - 1, 1))]
        local = pr.as_poly([Fraction(0), Fraction(0), *tail])
        new = pr.add(_recenter(local, b), pr.as_poly([val - slope * b, slope]))
        pieces.append(new)
    J = Potential(tuple(cuts), tuple(p if p else (Fraction(0),) for p in pieces))
    lift = Fraction(0)
    tmin = pot.tau_min_lower_bound(J)
    if tmin <= 0:
        lift = -tmin + Fraction(1, 8)
    if nonneg:
        fmin = min(
            pr.min_max_brackets(p, J.exact_breakpoints[i], J.exact_breakpoints[i + 1])[0]
            for i, p in enumerate(J.polys)
        )
        lift = max(lift, -fmin + Fraction(1, 8))
    if lift:
        lifted = tuple(
            (p[0] + lift, *p[1:]) if p else (lift,) for p in J.piece_coeffs
        )
        J = Potential(J.breakpoints, lifted)
    return J


def _recenter(p, b: Fraction):
    """p(x - b) expanded in the global variable."""
    out = ()
    shift = pr.as_poly([-b, Fraction(1)])
    acc = pr.as_poly([Fraction(1)])
    for c in p:
        out = pr.add(out, pr.scale(acc, c))
        acc = pr.mul(acc, shift)
    return out


def _farey_neighbors(x: Fraction, order: int) -> tuple[Fraction, Fraction]:
    """Consecutive order-N Farey fractions bracketing x (x not in F_N)."""
    n = math.floor(x)
    lo, hi = Fraction(n), Fraction(n + 1)
    while True:
        med = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        if med.denominator > order:
            return lo, hi
        if med == x:
            raise ValueError(f"{x} lies in the Farey sequence of order {order}")
        if med < x:
            lo = med
        else:
            hi = med


def _farey_gap_potential(rng, k_min, k_max, tight_volume: bool) -> Potential:
    """Potential whose slope range hides in a Farey gap of order 200.

    No level has a rational slope with denominator <= 200, and the
    return-time floor sits above 1/201, so every rational slope that does
    occur (denominator > 200) clears its period floor: the sieve / C2
    hypothesis holds by construction. With ``tight_volume`` the floor is
    kept just above 1/201 so the tau integral stays below 1/80.
    """
    k_min, k_max = Fraction(k_min), Fraction(k_max)
    N = _FAREY_ORDER
    # An irrational-looking slope center: huge-denominator rational.
    while True:
        mu = Fraction(int(rng.integers(10**8, 9 * 10**8)), 10**9) * (
            1 if rng.random() < 0.5 else -1
        )
        if mu.denominator > N:
            break
    A, B = _farey_neighbors(mu, N)
    w = B - A
    center = (A + B) / 2
    amp = w * Fraction(int(rng.integers(1, 8)), 32)  # < w/4
    deg = int(rng.integers(1, 5))
    psi = pr.as_poly([_rand_fraction(rng, -1, 1) for _ in range(deg + 1)])
    scale_bound = pr._abs_bound(psi, k_min, k_max)
    if scale_bound == 0:
        psi, scale_bound = pr.as_poly([Fraction(1)]), Fraction(1)
    slope = pr.add((center,), pr.scale(psi, amp / scale_bound))
    body = pr.antideriv(slope)
    J = Potential((k_min, k_max), (tuple(body[i] if i < len(body) else Fraction(0) for i in range(pr.degree(body) + 1)),))
    # Shift so the tau floor lands where we want it.
    tlo = pot.tau_min_lower_bound(J)
    if tight_volume:
        floor = Fraction(1, N + 1) + Fraction(1, 50_000)
    else:
        floor = Fraction(1, N + 1) + Fraction(int(rng.integers(1, 50)), 10_000)
    lift = floor - tlo
    coeffs = list(J.piece_coeffs[0])
    coeffs[0] += lift
    return Potential(J.breakpoints, (tuple(coeffs),))


LEMMAS = ("5.1", "5.2", "5.3")


def lemma_trial(lemma: str, seed: int) -> dict:
    """One generate-and-verify round; the row format of the lemma suites.

    Generation failures are logged as hypothesis failures (the instance
    never certified), never as conclusion violations.
    """
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {LEMMAS}")
    row = {"seed": seed, "hypothesis_ok": False, "conclusion_ok": None, "slack": None}
    try:
        if lemma == "5.1":
            report = verify_lemma_5_1(generate_admissible(seed, "lemma-5.1"))
        elif lemma == "5.2":
            f, a, b = generate_lemma_5_2_instance(seed)
            report = verify_lemma_5_2(f, a, b)
        else:
            report = verify_prop_5_3(generate_admissible(seed, "C1+C2+C3"))
    except GenerationError as exc:
        row["error"] = repr(exc)
        return row
    row["hypothesis_ok"] = report.hypothesis_ok
    row["conclusion_ok"] = report.conclusion_ok
    row["slack"] = report.extremal_margin
    return row


def _gap_center_of(f: Potential) -> Fraction:
    """Midpoint of the certified slope range of a single-piece potential."""
    d = pr.deriv(f.polys[0])
    mlo, _, _, mhi = pr.min_max_brackets(d, f.exact_k_min, f.exact_k_max)
    return (mlo + mhi) / 2
