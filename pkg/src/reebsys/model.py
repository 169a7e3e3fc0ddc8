"""Assembly of potentials into a full invariant-contact-form model.

A model is surgery data plus a list of components; each component is a
potential together with its two boundary orbits (critical circles of the
moment map, with their stabilizer orders). The module computes the
systole with a certificate, the contact volume, the systolic ratio, the
realizability validation, the general systolic bound check and the
closed-form Zoll/Besse evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import polyroots as pr
from . import potentials as pot
from .potentials import Potential
from .seifert import SurgeryData, euler_number, normalize


class ModelError(ValueError):
    """Model cannot be evaluated as requested."""


@dataclass(frozen=True)
class BoundaryOrbit:
    """A critical circle bounding a component: level, stabilizer, identity.

    ``adjacency_id`` is a token shared between the components bounding the
    same circle; it drives both the region graph and systole dedup.
    """

    K_crit: object  # nonzero real (int / Fraction / float)
    p: int = 1
    adjacency_id: Optional[str] = None

    def __post_init__(self):
        if self.K_crit == 0:
            raise ModelError("boundary orbit at K = 0 (0 is a regular value)")
        if self.p < 1:
            raise ModelError(f"stabilizer order must be >= 1, got {self.p}")

    @property
    def period(self):
        K = self.K_crit
        if isinstance(K, float):
            return abs(K) / self.p
        return Fraction(abs(Fraction(K)), self.p)


@dataclass(frozen=True)
class Component:
    potential: Potential
    lower: BoundaryOrbit
    upper: BoundaryOrbit

    @property
    def crosses_zero(self) -> bool:
        return self.potential.exact_k_min < 0 < self.potential.exact_k_max


@dataclass(frozen=True)
class ContactModel:
    surgery: SurgeryData
    components: tuple[Component, ...]
    tame: bool = True

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ModelError("model needs at least one component")

    @property
    def I0(self) -> tuple[int, ...]:
        """Indices of components whose K-interval crosses zero."""
        return tuple(i for i, c in enumerate(self.components) if c.crosses_zero)


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str
    deficit: float = 0.0


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(m: ContactModel) -> ValidationReport:
    """Structural invariants plus the realizability positivity constraint.

    The realizability constraint generalizes the level-1 positivity from
    the systolic-bound proof: with R(c) = e + (1/c) sum_{I0}(J_i(c) +
    J_i(-c)), the quotient-area positivity forces R(c) >= 0 for every
    level c in (0, c_max]. Checked exactly by sign analysis of the
    piecewise polynomial c * R(c); models with I0 empty skip it.
    """
    out: list[Violation] = []
    stab_needed: list[int] = []
    seen_ids: dict[str, tuple] = {}
    for i, comp in enumerate(m.components):
        J = comp.potential
        where = f"component {i}"
        for orbit, bp, name in (
            (comp.lower, J.k_min, "lower"),
            (comp.upper, J.k_max, "upper"),
        ):
            if not math.isclose(float(orbit.K_crit), float(bp), rel_tol=0, abs_tol=1e-12):
                out.append(
                    Violation(
                        "boundary-mismatch",
                        where,
                        f"{name} orbit at K={orbit.K_crit} but potential ends at {bp}",
                        abs(float(orbit.K_crit) - float(bp)),
                    )
                )
            if orbit.p >= 2:
                stab_needed.append(orbit.p)
            if orbit.adjacency_id is not None:
                key = orbit.adjacency_id
                entry = (float(orbit.K_crit), orbit.p)
                if key in seen_ids and seen_ids[key] != entry:
                    out.append(
                        Violation(
                            "adjacency-mismatch",
                            where,
                            f"id {key!r} used with conflicting (K, p): "
                            f"{seen_ids[key]} vs {entry}",
                        )
                    )
                seen_ids.setdefault(key, entry)
        c1 = pot.check_C1(J)
        if not c1:
            # Graded deficit |min tau| so a search can climb back to
            # feasibility instead of seeing a binary wall.
            deficit = abs(pot.tau_min(J))
            out.append(
                Violation("C1", where, f"tau <= 0 at k={c1.witness[0]}", deficit)
            )
    # Stabilizers >= 2 must appear among the normalized surgery labels.
    available = [p for p, _ in normalize(m.surgery).coefficients if p >= 2]
    for p in sorted(stab_needed, reverse=True):
        if p in available:
            available.remove(p)
        else:
            out.append(
                Violation(
                    "stabilizer-label",
                    "surgery",
                    f"boundary stabilizer {p} has no surgery coefficient",
                )
            )
    if m.I0 and not any(v.kind == "C1" for v in out):
        out.extend(_realizability_violations(m))
    return ValidationReport(tuple(out))


def _realizability_violations(m: ContactModel) -> list[Violation]:
    e = euler_number(m.surgery)
    c_max = min(
        min(-m.components[i].potential.exact_k_min, m.components[i].potential.exact_k_max)
        for i in m.I0
    )
    # P(c) = c * R(c) = e*c + sum (J_i(c) + J_i(-c)), piecewise polynomial
    # on [0, c_max]; R >= 0 on (0, c_max] iff P >= 0 there, and P(0) >= 0
    # automatically (it equals 2 * sum J_i(0) > 0 under C1).
    cuts = {Fraction(0), c_max}
    for i in m.I0:
        for b in m.components[i].potential.exact_breakpoints:
            if 0 < abs(b) < c_max:
                cuts.add(abs(b))
    cuts = sorted(cuts)
    out = []
    for a, b in zip(cuts, cuts[1:]):
        P = pr.as_poly([Fraction(0), e])
        mid = (a + b) / 2
        for i in m.I0:
            J = m.components[i].potential
            P = pr.add(P, J.polys[J.piece_index(mid)])
            neg_piece = J.polys[J.piece_index(-mid)]
            P = pr.add(P, pr.compose_neg(neg_piece))
        ok, w = pr.nonneg_on(P, a, b)
        if not ok:
            val = pr.eval_at(P, w) / w if w != 0 else pr.eval_at(pr.deriv(P), w)
            out.append(
                Violation(
                    "realizability",
                    f"level c={float(w)}",
                    f"R(c) = {float(val)} < 0",
                    deficit=abs(float(val)),
                )
            )
            break
    return out


# -- systole -----------------------------------------------------------


@dataclass(frozen=True)
class SystoleCertificate:
    kind: str  # "boundary" | "interior" | "band"
    component: Optional[int]
    detail: dict


@dataclass(frozen=True)
class SystoleResult:
    value: float
    exact_value: Optional[Fraction]
    certificate: SystoleCertificate

    def __float__(self):
        return self.value


def systole(m: ContactModel) -> SystoleResult:
    """Shortest closed-orbit period, with the achieving orbit as certificate.

    Candidates: each distinct boundary circle (period |K|/p, dedup by
    adjacency id) and each component's interior orbit-period infimum.
    """
    report = validate(m)
    if not report:
        raise ModelError(f"invalid model: {[v.kind for v in report.violations]}")
    best: tuple[float, Optional[Fraction], SystoleCertificate] | None = None

    def consider(value, exact, cert):
        nonlocal best
        if best is None or float(value) < best[0]:
            best = (float(value), exact, cert)

    seen: set[str] = set()
    for i, comp in enumerate(m.components):
        for name, orbit in (("lower", comp.lower), ("upper", comp.upper)):
            if orbit.adjacency_id is not None:
                if orbit.adjacency_id in seen:
                    continue
                seen.add(orbit.adjacency_id)
            per = orbit.period
            consider(
                per,
                per if isinstance(per, Fraction) else None,
                SystoleCertificate(
                    "boundary",
                    i,
                    {"side": name, "K": orbit.K_crit, "p": orbit.p, "id": orbit.adjacency_id},
                ),
            )
    # Boundary orbits cap the interior search: any interior orbit beyond
    # the current best is irrelevant.
    assert best is not None
    cap = best[0]
    for i, comp in enumerate(m.components):
        try:
            orbits = pot.closed_orbits(comp.potential, cap * (1 + 1e-9))
        except pot.DegeneratePotentialError:
            # The full enumeration below the boundary cap may be infinite
            # (tau -> 0 at an endpoint); the shortest single orbit can
            # still be certified with a smaller self-chosen cap.
            try:
                rec = pot._min_orbit_record(comp.potential)
            except pot.DegeneratePotentialError:
                continue
            orbits = [rec] if rec is not None else []
        for rec in orbits:
            consider(
                rec.minimal_period,
                None,
                SystoleCertificate(
                    "band" if rec.kind == "constant-slope-band" else "interior",
                    i,
                    {"k": rec.k, "p": rec.p, "q": rec.q},
                ),
            )
    return SystoleResult(best[0], best[1], best[2])


def volume(m: ContactModel):
    """Total contact volume: sum of the component integrals of tau.

    Equality with the true volume needs the tame assumption (isolated
    critical circles); non-tame models only admit a lower bound and are
    refused.
    """
    if not m.tame:
        raise ModelError(
            "non-tame model: critical levels may carry volume, the sum of "
            "component integrals is only a lower bound"
        )
    vols = [pot.volume_contribution(c.potential) for c in m.components]
    if all(isinstance(v, Fraction) for v in vols):
        return sum(vols, Fraction(0))
    return float(sum(float(v) for v in vols))


def systolic_ratio(m: ContactModel) -> float:
    """sys^2 / Vol."""
    s = systole(m)
    vol = volume(m)
    return float(s.value) ** 2 / float(vol)


@dataclass(frozen=True)
class BoundReport:
    ratio: float
    bound: float
    margin: float

    @property
    def ok(self) -> bool:
        return self.margin >= 0


def systolic_bound(e: Fraction) -> Fraction:
    """The proven wall max(80, 225/|e|); requires e != 0."""
    if e == 0:
        raise ModelError("Euler number must be nonzero")
    return max(Fraction(80), Fraction(225) / abs(Fraction(e)))


def check_theorem_bound(m: ContactModel) -> BoundReport:
    """Check sys^2 <= max(80, 225/|e|) Vol on a validated model."""
    e = euler_number(m.surgery)
    bound = systolic_bound(e)  # raises on e = 0
    ratio = systolic_ratio(m)
    return BoundReport(ratio=ratio, bound=float(bound), margin=float(bound) - ratio)


# -- Zoll / Besse closed form -----------------------------------------


@dataclass(frozen=True)
class ZollBesseResult:
    sys: object
    vol: object
    ratio: object


def zoll_besse_evaluate(K0, d: SurgeryData) -> ZollBesseResult:
    """Closed-form invariants of the Besse form with constant moment map K0.

    vol = K0^2 |e|, sys = K0 / max p_i; the ratio equals 1/|e| exactly in
    the Zoll case (all p_i = 1) and is strictly smaller otherwise.
    """
    e = euler_number(d)
    if e == 0:
        raise ModelError("Euler number must be nonzero")
    exact = not isinstance(K0, float)
    K0x = Fraction(K0) if exact else K0
    if K0x <= 0:
        raise ModelError("K0 must be positive")
    p_max = max(p for p, _ in d.coefficients)
    vol = K0x * K0x * abs(e)
    sys = K0x / p_max
    ratio = sys * sys / vol
    if not exact:
        vol, sys, ratio = float(vol), float(sys), float(ratio)
    return ZollBesseResult(sys=sys, vol=vol, ratio=ratio)
