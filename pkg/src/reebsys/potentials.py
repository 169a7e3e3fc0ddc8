"""Piecewise-polynomial potentials: return times, closed orbits, volume.

A potential J lives on [k_min, k_max], is C1 across its breakpoints, and
encodes the first-return dynamics of one invariant cylinder:

* tau(k) = J(k) - k J'(k) is the return time at level k,
* -J'(k) is the rotation shift, so level k carries a closed orbit exactly
  when J'(k) is a rational p/q, of minimal period q * tau(k).

Coefficients are normalized internally to exact rationals (floats convert
exactly), so "J'(k) = p/q" is solved as a polynomial identity per
candidate rational instead of testing sampled values for rationality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import polyroots as pr
from .polyroots import Fraction as _F, Poly


class PotentialError(ValueError):
    """Structurally invalid potential (bad tiling, C1 break, domain)."""


class DegeneratePotentialError(ValueError):
    """Operation requires a positive return time and the potential has none."""


_C1_TOL = 1e-12


@dataclass(frozen=True)
class Potential:
    """Piecewise polynomial on [breakpoints[0], breakpoints[-1]].

    ``piece_coeffs[i]`` are the ascending-power coefficients of the piece
    on [breakpoints[i], breakpoints[i+1]], expressed in the global
    variable k. ``exact`` records whether the input coefficients were all
    rationals; it only affects how strictly C1 continuity is enforced
    (exact equality vs 1e-12), every downstream computation is exact
    either way.
    """

    breakpoints: tuple
    piece_coeffs: tuple[tuple, ...]
    exact: bool = None  # type: ignore[assignment]

    def __post_init__(self):
        bps = tuple(self.breakpoints)
        pieces = tuple(tuple(c for c in piece) for piece in self.piece_coeffs)
        if len(bps) < 2:
            raise PotentialError("need at least two breakpoints")
        if len(pieces) != len(bps) - 1:
            raise PotentialError(
                f"{len(pieces)} pieces do not tile {len(bps) - 1} intervals"
            )
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise PotentialError("breakpoints must be strictly increasing")
        exact = all(_is_exact(x) for x in bps) and all(
            _is_exact(c) for piece in pieces for c in piece
        )
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "piece_coeffs", pieces)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "_bps", tuple(_F(b) for b in bps))
        object.__setattr__(self, "_polys", tuple(pr.as_poly(p) for p in pieces))
        self._check_c1_continuity()

    # -- structural ----------------------------------------------------

    def _check_c1_continuity(self):
        tol = _F(0) if self.exact else _F(_C1_TOL).limit_denominator(10**15)
        for i in range(1, len(self._bps) - 1):
            b = self._bps[i]
            left, right = self._polys[i - 1], self._polys[i]
            for f, g, what in (
                (left, right, "value"),
                (pr.deriv(left), pr.deriv(right), "derivative"),
            ):
                gap = abs(pr.eval_at(f, b) - pr.eval_at(g, b))
                if gap > tol:
                    raise PotentialError(
                        f"C1 {what} mismatch at breakpoint {float(b)}: gap {float(gap)}"
                    )

    @property
    def k_min(self):
        return self.breakpoints[0]

    @property
    def k_max(self):
        return self.breakpoints[-1]

    @property
    def exact_k_min(self) -> _F:
        return self._bps[0]

    @property
    def exact_k_max(self) -> _F:
        return self._bps[-1]

    @property
    def polys(self) -> tuple[Poly, ...]:
        return self._polys

    @property
    def exact_breakpoints(self) -> tuple[_F, ...]:
        return self._bps

    def piece_index(self, k) -> int:
        """Index of the piece whose closed interval contains k."""
        k = _F(k)
        if not self._bps[0] <= k <= self._bps[-1]:
            raise PotentialError(f"level {float(k)} outside [{self.k_min}, {self.k_max}]")
        for i in range(len(self._polys)):
            if k <= self._bps[i + 1]:
                return i
        return len(self._polys) - 1

    # -- evaluation ----------------------------------------------------

    def eval(self, k):
        return self._eval_with(lambda p: p, k)

    def deriv(self, k):
        return self._eval_with(pr.deriv, k)

    def second_deriv(self, k):
        # C1 only: at a breakpoint this is the left piece's value.
        return self._eval_with(lambda p: pr.deriv(pr.deriv(p)), k)

    def _eval_with(self, transform, k):
        poly = transform(self._polys[self.piece_index(k)])
        v = pr.eval_at(poly, _F(k))
        return v if self.exact and _is_exact(k) else float(v)

    def scaled(self, lam) -> "Potential":
        """The rescaled potential k -> lam * J(k / lam) on the dilated domain."""
        lam = _F(lam)
        if lam <= 0:
            raise PotentialError("scale factor must be positive")
        bps = [b * lam for b in self._bps]
        pieces = [
            tuple(c * lam / lam**i for i, c in enumerate(p)) for p in self._polys
        ]
        if not self.exact:
            bps = [float(b) for b in bps]
            pieces = [tuple(float(c) for c in p) for p in pieces]
        return Potential(tuple(bps), tuple(pieces))


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) or (
        hasattr(x, "denominator") and not isinstance(x, float)
    )


def polynomial_potential(coeffs: Iterable, k_min, k_max) -> Potential:
    """Single-piece potential from ascending-power coefficients."""
    return Potential((k_min, k_max), (tuple(coeffs),))


# -- return time -------------------------------------------------------


def tau_poly(piece: Poly) -> Poly:
    """The return-time polynomial J - k J' of one piece: a_j -> (1-j) a_j."""
    return pr.as_poly([(1 - j) * c for j, c in enumerate(piece)])


def return_time(J: Potential, k):
    """tau(k) = J(k) - k J'(k)."""
    i = J.piece_index(k)
    v = pr.eval_at(tau_poly(J.polys[i]), _F(k))
    return v if J.exact and _is_exact(k) else float(v)


def tau_min(J: Potential, lo=None, hi=None) -> float:
    """Certified global minimum of tau over [lo, hi] (default: full domain)."""
    mlo, mhi = _tau_min_brackets(J, lo, hi)
    return float((mlo + mhi) / 2) if mlo != mhi else float(mlo)


def tau_min_lower_bound(J: Potential, lo=None, hi=None) -> _F:
    """Exact rational lower bound for min tau; drives the q cutoffs."""
    return _tau_min_brackets(J, lo, hi)[0]


def tau_max_upper_bound(J: Potential, lo=None, hi=None) -> _F:
    return _tau_minmax(J, lo, hi)[3]


def _tau_min_brackets(J: Potential, lo=None, hi=None) -> tuple[_F, _F]:
    m = _tau_minmax(J, lo, hi)
    return m[0], m[1]


def _tau_minmax(J: Potential, lo=None, hi=None) -> tuple[_F, _F, _F, _F]:
    lo = J.exact_k_min if lo is None else _F(lo)
    hi = J.exact_k_max if hi is None else _F(hi)
    mins_lo, mins_hi, maxs_lo, maxs_hi = [], [], [], []
    for i, piece in enumerate(J.polys):
        a = max(J.exact_breakpoints[i], lo)
        b = min(J.exact_breakpoints[i + 1], hi)
        if a > b:
            continue
        mlo, mhi, xlo, xhi = pr.min_max_brackets(tau_poly(piece), a, b)
        mins_lo.append(mlo)
        mins_hi.append(mhi)
        maxs_lo.append(xlo)
        maxs_hi.append(xhi)
    if not mins_lo:
        raise PotentialError("empty evaluation window")
    return min(mins_lo), min(mins_hi), max(maxs_lo), max(maxs_hi)


# -- admissibility checks ---------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a C1/C2/C3-style check; falsy when violated."""

    ok: bool
    witness: tuple | None = None
    value: object = None

    def __bool__(self):
        return self.ok


def check_C1(J: Potential) -> CheckResult:
    """tau > 0 on the open domain; witness level on failure."""
    for i, piece in enumerate(J.polys):
        t = tau_poly(piece)
        a, b = J.exact_breakpoints[i], J.exact_breakpoints[i + 1]
        ok, w = pr.positive_on_open(t, a, b)
        if not ok:
            return CheckResult(False, witness=(float(w),), value=float(pr.eval_at(t, w)))
    # Interior breakpoints are in the open domain too.
    for b in J.exact_breakpoints[1:-1]:
        t = tau_poly(J.polys[J.piece_index(b)])
        v = pr.eval_at(t, b)
        if v <= 0:
            return CheckResult(False, witness=(float(b),), value=float(v))
    return CheckResult(True)


def check_C2(J: Potential) -> CheckResult:
    """Orbit-period floor on [-1, 1]: rational slope p/q forces tau >= 1/q.

    Decidable because tau >= tau_min rules out every q with
    1/q <= tau_min; only the finitely many smaller q are solved exactly.
    """
    lo, hi = _F(-1), _F(1)
    if not (J.exact_k_min <= lo and hi <= J.exact_k_max):
        raise PotentialError("check_C2 needs [-1, 1] inside the domain")
    tmin = tau_min_lower_bound(J, lo, hi)
    if tmin <= 0:
        c1 = check_C1(J)
        if not c1:
            return CheckResult(False, witness=(c1.witness[0], None, None), value=c1.value)
        # tau touches 0 only at domain endpoints; fall back to a tiny
        # positive floor strictly inside.
        tmin = _F(1, 10**9)
    q_cap = math.ceil(1 / tmin)
    if q_cap > 100_000:
        raise PotentialError(
            "tau comes too close to 0 on [-1, 1]; the C2 rational scan "
            f"would need {q_cap} denominators"
        )
    for q in range(1, q_cap + 1):
        if _F(1, q) <= tmin:
            continue
        for level, p, tau_sign in _slope_hits(J, q, lo, hi, _F(1, q)):
            if tau_sign < 0:
                return CheckResult(
                    False, witness=(level, p, q), value=None
                )
    return CheckResult(True)


def check_C3(J: Potential) -> CheckResult:
    """Volume condition on [-1, 1]: integral of tau must be below 1/80."""
    if not (J.exact_k_min <= -1 and 1 <= J.exact_k_max):
        raise PotentialError("check_C3 needs [-1, 1] inside the domain")
    total = _F(0)
    for i, piece in enumerate(J.polys):
        a = max(J.exact_breakpoints[i], _F(-1))
        b = min(J.exact_breakpoints[i + 1], _F(1))
        if a < b:
            total += pr.integrate(tau_poly(piece), a, b)
    ok = total < _F(1, 80)
    return CheckResult(ok, value=total if J.exact else float(total))


def _slope_hits(J: Potential, q: int, lo: _F, hi: _F, tau_floor: _F):
    """Levels in [lo, hi] where J' equals some p/q in lowest terms.

    Yields (level_float, p, sign) with sign the exact sign of
    tau(level) - tau_floor. Constant-slope pieces yield one hit.
    """
    for i, piece in enumerate(J.polys):
        a = max(J.exact_breakpoints[i], lo)
        b = min(J.exact_breakpoints[i + 1], hi)
        if a > b:
            continue
        d = pr.deriv(piece)
        t_floor = pr.shift_constant(tau_poly(piece), -tau_floor)
        if pr.degree(d) <= 0:
            v = d[0] if d else _F(0)
            if v.denominator == q and math.gcd(v.numerator, q) == 1:
                mid = (a + b) / 2
                s = pr.eval_at(t_floor, mid)
                yield float(mid), v.numerator, (0 if s == 0 else (1 if s > 0 else -1))
            continue
        dlo, _, _, dhi = pr.min_max_brackets(d, a, b)
        p_lo = math.ceil(dlo * q)
        p_hi = math.floor(dhi * q)
        for p in range(p_lo, p_hi + 1):
            if math.gcd(p, q) != 1:
                continue
            g = pr.shift_constant(d, -_F(p, q))
            for rlo, rhi in pr.isolate_roots(g, a, b, include_a=True, include_b=True):
                s = pr.sign_at_root(g, t_floor, rlo, rhi)
                level = pr.refine(g, rlo, rhi)
                yield level, p, s


# -- closed orbits -----------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    """A closed Reeb orbit (or one S1-family of them) inside a component."""

    k: float
    p: int
    q: int
    minimal_period: float
    kind: str  # "isolated-root" | "constant-slope-band"

    def __post_init__(self):
        if self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} not in lowest terms")
        if self.minimal_period <= 0:
            raise ValueError("minimal period must be positive")


def closed_orbits(J: Potential, period_bound: float) -> list[OrbitRecord]:
    """Every closed orbit with minimal period <= period_bound.

    Complete by the period floor: an orbit of rotation number p/q has
    period q * tau >= q * tau_min, so only q up to
    period_bound / tau_min are scanned; for each q the equation
    J'(k) = p/q is solved exactly per candidate p.
    """
    if not check_C1(J):
        raise DegeneratePotentialError("closed_orbits requires tau > 0 (C1)")
    if period_bound <= 0:
        return []
    bound = _F(period_bound).limit_denominator(10**15)
    lo, hi = J.exact_k_min, J.exact_k_max
    lo_eff, hi_eff = lo, hi
    records: list[OrbitRecord] = []
    tmin = tau_min_lower_bound(J)
    if tmin <= 0:
        # tau vanishes at a closed-domain endpoint (C1 guarantees it is
        # positive inside). Certify slivers at the offending endpoints in
        # which every orbit period exceeds the bound, trim them off, and
        # scan the rest with the now-positive floor.
        lo_eff, lo_recs = _trim_endpoint(J, bound, upper=False)
        hi_eff, hi_recs = _trim_endpoint(J, bound, upper=True)
        records.extend(lo_recs)
        records.extend(hi_recs)
        tmin = tau_min_lower_bound(J, lo_eff, hi_eff)
        if tmin <= 0:
            raise DegeneratePotentialError("tau not positive on the trimmed domain")
    q_cap = math.floor(bound / tmin)
    if q_cap > 100_000:
        raise DegeneratePotentialError(
            f"period bound {period_bound} requires scanning {q_cap} "
            "denominators; tau is too close to 0 somewhere in the domain"
        )
    seen_levels: list[tuple[float, int, int]] = [
        (r.k, r.p, r.q) for r in records
    ]
    for q in range(1, q_cap + 1):
        for i, piece in enumerate(J.polys):
            a = max(J.exact_breakpoints[i], lo_eff)
            b = min(J.exact_breakpoints[i + 1], hi_eff)
            if a >= b:
                continue
            d = pr.deriv(piece)
            t = tau_poly(piece)
            if pr.degree(d) <= 0:
                v = d[0] if d else _F(0)
                if v.denominator == q and math.gcd(v.numerator, q) == 1:
                    tau_val = pr.eval_at(t, (a + b) / 2)  # tau constant on the band
                    period = q * tau_val
                    if period <= bound:
                        records.append(
                            OrbitRecord(
                                k=float((a + b) / 2),
                                p=v.numerator,
                                q=q,
                                minimal_period=float(period),
                                kind="constant-slope-band",
                            )
                        )
                continue
            dlo, _, _, dhi = pr.min_max_brackets(d, a, b)
            for p in range(math.ceil(dlo * q), math.floor(dhi * q) + 1):
                if math.gcd(p, q) != 1:
                    continue
                g = pr.shift_constant(d, -_F(p, q))
                brackets = pr.isolate_roots(
                    g, a, b, include_a=(a > lo), include_b=(b < hi)
                )
                for rlo, rhi in brackets:
                    level = pr.refine(g, rlo, rhi)
                    if any(
                        abs(level - l0) < 1e-9 and (p0, q0) == (p, q)
                        for l0, p0, q0 in seen_levels
                    ):
                        continue  # same breakpoint root seen from the other piece
                    tau_val = _value_at_root(g, t, rlo, rhi)
                    period = q * tau_val
                    if period <= float(bound) + 1e-12:
                        seen_levels.append((level, p, q))
                        records.append(
                            OrbitRecord(
                                k=level,
                                p=p,
                                q=q,
                                minimal_period=period,
                                kind="isolated-root",
                            )
                        )
    records.sort(key=lambda r: (r.q, r.p, r.k))
    return records


def _value_at_root(g: Poly, h: Poly, rlo: _F, rhi: _F) -> float:
    """h evaluated at the root of g isolated in [rlo, rhi].

    Float refinement inside the certified bracket; the consumers compare
    the result against bounds that already carry a 1e-12 slack.
    """
    if rlo == rhi:
        return float(pr.eval_at(h, rlo))
    return pr.eval_float(h, pr.refine(g, rlo, rhi))


def _trim_endpoint(J: Potential, bound: _F, upper: bool):
    """Certified sliver at a domain endpoint where tau vanishes.

    Returns ``(new_edge, records)``: inside the dropped sliver every
    closed orbit has period above ``bound`` except the finitely many
    orbits whose slope equals the endpoint slope exactly; those are
    isolated and returned as records.

    The floor argument: write D = J'(endpoint) = P/Q (exact rational)
    and certify tau(k) >= m1 * dist(k) and |J''| <= M2 on the sliver.
    An orbit of slope p/q != D satisfies |p/q - D| >= 1/(qQ), hence sits
    at distance >= 1/(q Q M2) from the endpoint and has period
    q tau >= m1 / (Q M2). The sliver is shrunk until that floor clears
    the bound; failure to clear it after 40 halvings means periods
    really accumulate (higher-order zero of tau) and the enumeration is
    refused.
    """
    edge = J.exact_k_max if upper else J.exact_k_min
    pidx = len(J.polys) - 1 if upper else 0
    piece = J.polys[pidx]
    t = tau_poly(piece)
    if pr.eval_at(t, edge) != 0:
        return edge, []
    other = J.exact_breakpoints[-2] if upper else J.exact_breakpoints[1]
    d = pr.deriv(piece)
    D = pr.eval_at(d, edge)
    Q = D.denominator
    # t has a root at the edge: factor out (edge - k) exactly (up to sign).
    lin = pr.as_poly([edge, -1]) if upper else pr.as_poly([-edge, 1])
    g, rem = pr.divmod_poly(t, lin)
    assert pr.is_zero(rem)
    d2 = pr.deriv(d)
    h = abs(edge - other) / 2
    for _ in range(40):
        slo, shi = (edge - h, edge) if upper else (edge, edge + h)
        m1 = pr.min_max_brackets(g, slo, shi)[0]
        _, _, x1, x2 = pr.min_max_brackets(d2, slo, shi)
        M2 = max(abs(x1), abs(x2))
        if m1 > 0 and M2 > 0 and m1 / (Q * M2) > bound:
            break
        if m1 > 0 and M2 == 0:
            # J' constant on the sliver with tau -> 0: a continuum of
            # closed orbits with periods sweeping down to 0.
            raise DegeneratePotentialError(
                "constant rational slope with vanishing tau at the boundary"
            )
        h /= 2
    else:
        raise DegeneratePotentialError(
            "orbit periods accumulate near a boundary zero of tau"
        )
    records = []
    shifted = pr.shift_constant(d, -D)
    if not pr.is_zero(shifted) and pr.degree(shifted) >= 1:
        for rlo, rhi in pr.isolate_roots(shifted, slo, shi):
            tau_val = _value_at_root(shifted, t, rlo, rhi)
            period = D.denominator * tau_val
            if 0 < period <= float(bound) + 1e-12:
                records.append(
                    OrbitRecord(
                        k=pr.refine(shifted, rlo, rhi),
                        p=D.numerator,
                        q=D.denominator,
                        minimal_period=period,
                        kind="isolated-root",
                    )
                )
    new_edge = slo if upper else shi
    return new_edge, records


def min_orbit_period(J: Potential) -> float:
    """Infimum of minimal periods of closed orbits; inf when none exist."""
    rec = _min_orbit_record(J)
    return rec.minimal_period if rec is not None else math.inf


def _min_orbit_record(J: Potential):
    """The shortest closed orbit, or None when no orbit exists.

    The simplest rational inside the certified range of J' caps the
    search: some orbit has q no larger than its denominator, so a single
    closed_orbits call with bound q * max tau finds the minimum.
    """
    if not check_C1(J):
        raise DegeneratePotentialError("min_orbit_period requires tau > 0 (C1)")
    slope_lo_hi = _slope_range_inner(J)
    if slope_lo_hi is None:
        # Constant slope everywhere: a single rational value.
        v = _global_constant_slope(J)
        orbits = closed_orbits(J, float(v.denominator * tau_max_upper_bound(J)) * (1 + 1e-9))
        return min(orbits, key=lambda o: o.minimal_period, default=None)
    inner_lo, inner_hi = slope_lo_hi
    simplest = pr.simplest_between(inner_lo, inner_hi)
    bound = float(simplest.denominator * tau_max_upper_bound(J)) * (1 + 1e-9)
    for _ in range(4):
        orbits = closed_orbits(J, bound)
        if orbits:
            return min(orbits, key=lambda o: o.minimal_period)
        bound *= 2
    return None


def _global_constant_slope(J: Potential) -> _F:
    d = pr.deriv(J.polys[0])
    return d[0] if d else _F(0)


def _slope_range_inner(J: Potential):
    """An open rational sub-interval of the range of J', or None if J' is constant.

    Refines the min/max brackets until an inner interval appears.
    """
    width = _F(1, 10**12)
    for _ in range(3):
        los, his = [], []
        for i, piece in enumerate(J.polys):
            d = pr.deriv(piece)
            a, b = J.exact_breakpoints[i], J.exact_breakpoints[i + 1]
            mlo, mhi, xlo, xhi = pr.min_max_brackets(d, a, b, width=width)
            los.append((mlo, mhi))
            his.append((xlo, xhi))
        min_hi = min(x for _, x in los)  # certified >= true min
        max_lo = max(x for x, _ in his)  # certified <= true max
        if min_hi < max_lo:
            return min_hi, max_lo
        min_lo = min(x for x, _ in los)
        max_hi = max(x for _, x in his)
        if min_lo == max_hi:
            return None  # genuinely constant
        width /= 10**6
    # Range is an interval of width below 1e-24; treat as constant only
    # if it exactly is, otherwise give up on tightening and use the outer
    # hull (may cost a few extra q in the scan, never misses orbits).
    return None if min_lo == max_hi else (min_lo, max_hi)


# -- volume ------------------------------------------------------------


def volume_contribution(J: Potential):
    """Exact integral of tau over the whole domain."""
    total = _F(0)
    for i, piece in enumerate(J.polys):
        total += pr.integrate(
            tau_poly(piece), J.exact_breakpoints[i], J.exact_breakpoints[i + 1]
        )
    return total if J.exact else float(total)
