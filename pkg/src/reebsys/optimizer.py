"""Stochastic search over parametrized model families for extremal ratios.

The admissible region is thin (C1 and realizability cut it out), so
infeasible candidates are not simply rejected: they score below every
feasible one by an amount equal to their summed constraint deficits,
which gives the derivative-free search a slope to climb back in on.

A reported ratio above the proven wall max(80, 225/|e|) is treated as an
implementation bug, not a discovery, and aborts with a diagnostic.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import model as mdl
from . import modelio
from .model import ContactModel, Violation
from .potentials import Potential
from .seifert import SurgeryData, euler_number


class TheoremViolationError(RuntimeError):
    """A candidate beat the proven systolic bound: the code is wrong
    somewhere, since the bound holds for every valid model."""


@dataclass(frozen=True)
class PotentialFamily:
    """A box-bounded parameter space with a decoder into concrete models.

    The decoder must produce a structurally well-formed model for every
    in-box vector (tiling, matching boundary levels); admissibility is
    the optimizer's problem.
    """

    names: tuple[str, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    decoder: Callable[[Sequence[float]], ContactModel]

    def __post_init__(self):
        if not (len(self.names) == len(self.lower) == len(self.upper)):
            raise ValueError("names and box bounds must have equal length")
        if any(l >= u for l, u in zip(self.lower, self.upper)):
            raise ValueError("empty parameter box")

    @property
    def parameter_dim(self) -> int:
        return len(self.names)

    def contains(self, theta: Sequence[float]) -> bool:
        return len(theta) == self.parameter_dim and all(
            l <= t <= u for t, l, u in zip(theta, self.lower, self.upper)
        )


@dataclass(frozen=True)
class CandidateResult:
    ratio: float  # -inf when infeasible
    violations: tuple[Violation, ...]
    model: Optional[ContactModel] = None

    @property
    def feasible(self) -> bool:
        return self.ratio > float("-inf")

    @property
    def penalty(self) -> float:
        return sum(v.deficit for v in self.violations)


def evaluate_candidate(fam: PotentialFamily, theta: Sequence[float]) -> CandidateResult:
    """Decode and score one parameter vector; pure and total in-box."""
    if not fam.contains(theta):
        raise ValueError(f"parameter vector {list(theta)} outside the box")
    try:
        m = fam.decoder(theta)
    except Exception as exc:
        return CandidateResult(
            float("-inf"),
            (Violation("decode", "family", repr(exc), deficit=1.0),),
        )
    report = mdl.validate(m)
    violations = list(report.violations)
    if not violations and not m.I0:
        violations.extend(_euler_volume_violations(m))
    if violations:
        return CandidateResult(float("-inf"), tuple(violations), m)
    return CandidateResult(mdl.systolic_ratio(m), (), m)


def _euler_volume_violations(m: ContactModel) -> list[Violation]:
    """Volume consistency for models away from the zero level.

    The base orbifold area forces Vol >= (min |K_crit|)^2 |e|; together
    with sys <= min |K_crit| this caps the ratio at 1/|e|. Models built
    from potentials alone can violate it, so the optimizer enforces it
    as a constraint with a graded deficit.
    """
    e = euler_number(m.surgery)
    if e == 0:
        return []
    k_floor = min(
        abs(float(o.K_crit))
        for c in m.components
        for o in (c.lower, c.upper)
    )
    vol = float(mdl.volume(m))
    need = k_floor * k_floor * abs(float(e))
    if vol + 1e-12 < need:
        return [
            Violation(
                "euler-volume",
                "model",
                f"volume {vol} below the orbifold-area floor {need}",
                deficit=need - vol,
            )
        ]
    return []


@dataclass(frozen=True)
class OptimizationReport:
    best_parameters: tuple[float, ...]
    best_ratio: float
    best_certificate: Optional[mdl.SystoleCertificate]
    violation_history: tuple[tuple[int, tuple[Violation, ...]], ...]
    evaluations: int
    wall_time: float
    trace: tuple[tuple[int, float], ...]  # (evaluation index, best so far)
    euler: Fraction


def maximize_ratio(
    fam: PotentialFamily, budget: int = 10_000, seed: int = 0, restarts: int = 4
) -> OptimizationReport:
    """Randomized restarts plus an adaptive (1+1) evolution strategy.

    Deterministic for a fixed seed: each restart owns a stream seeded by
    (seed, restart index), and candidates are evaluated in a fixed order
    (evaluation is pure, so a worker pool could score a generation
    concurrently without changing the outcome).
    """
    t0 = time.perf_counter()
    lower = np.array(fam.lower)
    upper = np.array(fam.upper)
    span = upper - lower
    e = _family_euler(fam)
    wall = float(mdl.systolic_bound(e)) if e != 0 else float("inf")

    best_theta: Optional[np.ndarray] = None
    best_ratio = float("-inf")
    best_cert: Optional[mdl.SystoleCertificate] = None
    history: list[tuple[int, tuple[Violation, ...]]] = []
    trace: list[tuple[int, float]] = []
    n_eval = 0
    per_restart = max(budget // max(restarts, 1), 1)

    def score(res: CandidateResult) -> float:
        # Feasible candidates always dominate infeasible ones; among the
        # infeasible, smaller total deficit is better.
        if res.feasible:
            return res.ratio
        return -1e9 - res.penalty

    for r in range(restarts):
        if n_eval >= budget:
            break
        rng = np.random.default_rng([seed, r])
        x = lower + rng.random(fam.parameter_dim) * span
        res = evaluate_candidate(fam, x)
        n_eval += 1
        cur = score(res)
        _record(res, n_eval, history)
        best_theta, best_ratio, best_cert = _update_best(
            res, x, best_theta, best_ratio, best_cert, wall
        )
        trace.append((n_eval, best_ratio))
        sigma = 0.3 * span
        for _ in range(per_restart - 1):
            if n_eval >= budget:
                break
            cand = np.clip(x + sigma * rng.standard_normal(fam.parameter_dim), lower, upper)
            res = evaluate_candidate(fam, cand)
            n_eval += 1
            _record(res, n_eval, history)
            s = score(res)
            if s >= cur:
                x, cur = cand, s
                sigma = np.minimum(sigma * 1.4, span)
            else:
                sigma = np.maximum(sigma * 0.96, span * 1e-9)
            best_theta, best_ratio, best_cert = _update_best(
                res, cand, best_theta, best_ratio, best_cert, wall
            )
            trace.append((n_eval, best_ratio))

    return OptimizationReport(
        best_parameters=tuple(float(t) for t in best_theta) if best_theta is not None else (),
        best_ratio=best_ratio,
        best_certificate=best_cert,
        violation_history=tuple(history),
        evaluations=n_eval,
        wall_time=time.perf_counter() - t0,
        trace=tuple(trace),
        euler=e,
    )


def _record(res: CandidateResult, idx: int, history: list):
    if res.violations:
        history.append((idx, res.violations))


def _update_best(res, theta, best_theta, best_ratio, best_cert, wall):
    if res.feasible and res.ratio > best_ratio:
        if res.ratio > wall + 1e-9:
            raise TheoremViolationError(
                f"candidate ratio {res.ratio} exceeds the proven wall {wall}; "
                "the systolic bound holds for every valid model, so this is "
                "an implementation bug - investigate before trusting results"
            )
        cert = mdl.systole(res.model).certificate if res.model is not None else None
        return np.array(theta, dtype=float), res.ratio, cert
    return best_theta, best_ratio, best_cert


def _family_euler(fam: PotentialFamily) -> Fraction:
    center = [(l + u) / 2 for l, u in zip(fam.lower, fam.upper)]
    try:
        return euler_number(fam.decoder(center).surgery)
    except Exception:
        return Fraction(0)


# -- ready-made families -----------------------------------------------


def zoll_family(e) -> PotentialFamily:
    """One-parameter family around the constant-potential optimum.

    The component sits over positive K on [1, 1 + w] with J identically
    1, so vol = w and sys = min(1, w-independent band period 1) = 1;
    the orbifold-area floor makes w >= |e| the feasible region and the
    ratio 1/w is maximized exactly at the known supremum 1/|e|.
    """
    e = Fraction(e)
    if e == 0:
        raise ValueError("Euler number must be nonzero")
    surgery = SurgeryData(0, (((-e).denominator, (-e).numerator),))

    def decode(theta):
        w = float(theta[0])
        J = Potential((1.0, 1.0 + w), ((1.0,),))
        return ContactModel(
            surgery,
            (
                mdl.Component(
                    J,
                    mdl.BoundaryOrbit(K_crit=1.0),
                    mdl.BoundaryOrbit(K_crit=1.0 + w),
                ),
            ),
        )

    hi = 2.0 * max(1.0, abs(float(e))) + 2.0
    return PotentialFamily(("w",), (0.05,), (hi,), decode)


def family_from_file(path) -> PotentialFamily:
    """Family file: the model format plus `parameters` and affine leaves."""
    skeleton, box = modelio.load_family_document(path)
    names = tuple(name for name, _, _ in box)

    def decode(theta):
        env = {
            name: Fraction(t).limit_denominator(10**12)
            for name, t in zip(names, theta)
        }
        return modelio.decode_model(skeleton, env)

    return PotentialFamily(
        names,
        tuple(lo for _, lo, _ in box),
        tuple(hi for _, _, hi in box),
        decode,
    )


# -- sharpness table ---------------------------------------------------


def sharpness_probe(
    e_list: Sequence,
    fam_builder: Callable[[Fraction], PotentialFamily] = zoll_family,
    budget: int = 2000,
    seed: int = 0,
) -> list[dict]:
    """Best found ratio per Euler number against 1/|e| and the wall."""
    rows = []
    for e in e_list:
        e = Fraction(e)
        row = {
            "e": str(e),
            "reference": float(1 / abs(e)) if e else float("nan"),
            "bound": float(mdl.systolic_bound(e)),
        }
        try:
            rep = maximize_ratio(fam_builder(e), budget=budget, seed=seed)
            row["best_ratio"] = rep.best_ratio
            row["evaluations"] = rep.evaluations
            row["error"] = ""
        except Exception as exc:
            row["best_ratio"] = float("nan")
            row["evaluations"] = 0
            row["error"] = repr(exc)
        rows.append(row)
    return rows


def sharpness_csv(rows: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(
        out, fieldnames=["e", "reference", "bound", "best_ratio", "evaluations", "error"]
    )
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k, "")) for k in writer.fieldnames})
    return out.getvalue()


def _fmt(x):
    return format(x, ".12g") if isinstance(x, float) else x
