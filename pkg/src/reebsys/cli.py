"""Command-line front end.

Exit codes: 0 success, 1 validation or hypothesis failure, 2 usage
error. All numeric output uses 12 significant digits; CSV output is
bit-stable for a fixed seed.
"""

from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction

import click

from . import analysis, graph as graphmod, model as mdl, modelio, optimizer as opt
from . import potentials as pot
from .seifert import SurgeryData, equivalent, euler_number, normalize


def _g(x) -> str:
    """12 significant digits for floats, exact text for rationals."""
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _parse_surgery(text: str, genus: int) -> SurgeryData:
    try:
        pairs = json.loads(text)
        return SurgeryData(genus, tuple((int(p), int(q)) for p, q in pairs))
    except (ValueError, TypeError) as exc:
        raise click.UsageError(f"bad surgery data {text!r}: {exc}")


def _load_model(path: str) -> mdl.ContactModel:
    try:
        return modelio.load_model(path)
    except OSError as exc:
        raise click.UsageError(str(exc))
    except modelio.ModelIOError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Invariant contact forms on circle bundles: systoles, volumes,
    orbit enumeration, lemma verification and ratio search."""


@main.command()
@click.argument("surgery")
@click.option("--genus", default=0, show_default=True)
def euler(surgery, genus):
    """Euler number of surgery data, e.g. '[[2,1],[3,1],[5,1]]'."""
    click.echo(_g(euler_number(_parse_surgery(surgery, genus))))


@main.command("normalize")
@click.argument("surgery")
@click.option("--genus", default=0, show_default=True)
def normalize_cmd(surgery, genus):
    """Canonical form of surgery data."""
    d = normalize(_parse_surgery(surgery, genus))
    click.echo(json.dumps([list(pq) for pq in d.coefficients]))


@main.command()
@click.argument("surgery_a")
@click.argument("surgery_b")
@click.option("--genus-a", default=0, show_default=True)
@click.option("--genus-b", default=0, show_default=True)
def equiv(surgery_a, surgery_b, genus_a, genus_b):
    """Whether two surgery descriptions give the same bundle."""
    same = equivalent(
        _parse_surgery(surgery_a, genus_a), _parse_surgery(surgery_b, genus_b)
    )
    click.echo("true" if same else "false")


@main.command("graph")
@click.argument("model_file", type=click.Path())
@click.option("--dot", is_flag=True, help="emit dot format instead of adjacency text")
def graph_cmd(model_file, dot):
    """Signed region graph of a model."""
    m = _load_model(model_file)
    try:
        g = graphmod.build_graph(m)
    except graphmod.GraphError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(graphmod.to_dot(g) if dot else graphmod.to_adjacency_text(g))


@main.command("eval")
@click.argument("model_file", type=click.Path())
@click.option("--profile-csv", type=click.Path(), default=None,
              help="write k, tau, J' samples for plotting")
def eval_cmd(model_file, profile_csv):
    """Systole, volume, systolic ratio and bound margin of a model."""
    m = _load_model(model_file)
    report = mdl.validate(m)
    if not report:
        for v in report.violations:
            click.echo(f"invalid: {v.kind} at {v.where}: {v.detail}", err=True)
        sys.exit(1)
    s = mdl.systole(m)
    vol = mdl.volume(m)
    ratio = float(s.value) ** 2 / float(vol)
    click.echo(f"sys {_g(float(s.value))}")
    click.echo(f"vol {_g(float(vol))}")
    click.echo(f"ratio {_g(ratio)}")
    click.echo(
        f"certificate {s.certificate.kind} component={s.certificate.component} "
        f"{s.certificate.detail}"
    )
    e = euler_number(m.surgery)
    if e != 0:
        bound = float(mdl.systolic_bound(e))
        click.echo(f"bound-margin {_g(bound - ratio)}")
    else:
        click.echo("bound-margin n/a (Euler number is zero)")
    if profile_csv:
        _write_profile(m, profile_csv)


def _write_profile(m, path, samples=512):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["component", "k", "tau", "jprime"])
        for i, comp in enumerate(m.components):
            J = comp.potential
            lo, hi = float(J.k_min), float(J.k_max)
            for j in range(samples + 1):
                k = lo + (hi - lo) * j / samples
                w.writerow(
                    [i, _g(k), _g(float(pot.return_time(J, k))), _g(float(J.deriv(k)))]
                )


@main.command()
@click.argument("model_file", type=click.Path())
@click.option("--bound", type=float, required=True, help="period bound")
@click.option("--csv", "csv_out", type=click.Path(), default=None)
def orbits(model_file, bound, csv_out):
    """All closed orbits with minimal period up to the bound."""
    m = _load_model(model_file)
    rows = []
    for i, comp in enumerate(m.components):
        try:
            recs = pot.closed_orbits(comp.potential, bound)
        except (pot.PotentialError, pot.DegeneratePotentialError) as exc:
            click.echo(f"error: component {i}: {exc}", err=True)
            sys.exit(1)
        rows.extend((i, r) for r in recs)
    lines = [["k", "p", "q", "period", "kind"]]
    lines.extend(
        [_g(r.k), str(r.p), str(r.q), _g(r.minimal_period), r.kind] for _, r in rows
    )
    _emit_csv(lines, csv_out)


def _emit_csv(lines, path):
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerows(lines)
    else:
        w = csv.writer(sys.stdout)
        w.writerows(lines)


@main.command("verify-lemmas")
@click.option("--lemma", type=click.Choice(analysis.LEMMAS), required=True)
@click.option("--trials", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--csv", "csv_out", type=click.Path(), default=None)
def verify_lemmas(lemma, trials, seed, csv_out):
    """Property-test one analytic statement on generated instances."""
    lines = [["seed", "hypothesis_ok", "conclusion_ok", "slack"]]
    violations = 0
    certified = 0
    for t in range(trials):
        row = analysis.lemma_trial(lemma, seed + t)
        if row["hypothesis_ok"]:
            certified += 1
            if row["conclusion_ok"] is False:
                violations += 1
        lines.append(
            [
                str(row["seed"]),
                str(row["hypothesis_ok"]).lower(),
                "" if row["conclusion_ok"] is None else str(row["conclusion_ok"]).lower(),
                "" if row["slack"] is None else _g(float(row["slack"])),
            ]
        )
    _emit_csv(lines, csv_out)
    click.echo(
        f"lemma {lemma}: {certified}/{trials} certified, {violations} conclusion "
        "violations",
        err=True,
    )
    if violations:
        sys.exit(1)


@main.command("check-theorem")
@click.argument("model_file", type=click.Path())
def check_theorem(model_file):
    """Check the systolic inequality on one model."""
    m = _load_model(model_file)
    try:
        report = mdl.check_theorem_bound(m)
    except mdl.ModelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ratio {_g(report.ratio)}")
    click.echo(f"bound {_g(report.bound)}")
    click.echo(f"margin {_g(report.margin)}")
    if not report.ok:
        click.echo("BOUND VIOLATED: this falsifies the implementation", err=True)
        sys.exit(1)


@main.command()
@click.option("--family", "family_file", type=click.Path(), required=True)
@click.option("--budget", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_csv", type=click.Path(), default=None,
              help="write the best-so-far trace as CSV")
def optimize(family_file, budget, seed, out_csv):
    """Search a parametrized family for the largest systolic ratio."""
    try:
        fam = opt.family_from_file(family_file)
    except OSError as exc:
        raise click.UsageError(str(exc))
    except modelio.ModelIOError as exc:
        click.echo(f"error: {family_file}: {exc}", err=True)
        sys.exit(1)
    try:
        rep = opt.maximize_ratio(fam, budget=budget, seed=seed)
    except opt.TheoremViolationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"best-ratio {_g(rep.best_ratio)}")
    click.echo(
        "best-parameters "
        + " ".join(f"{n}={_g(v)}" for n, v in zip(fam.names, rep.best_parameters))
    )
    click.echo(f"evaluations {rep.evaluations}")
    click.echo(f"infeasible {len(rep.violation_history)}")
    if out_csv:
        lines = [["evaluation", "best_ratio"]]
        lines.extend([str(i), _g(v)] for i, v in rep.trace)
        _emit_csv(lines, out_csv)


@main.command()
@click.argument("k0")
@click.argument("surgery")
@click.option("--genus", default=0, show_default=True)
def zoll(k0, surgery, genus):
    """Closed-form invariants of the constant-moment-map form."""
    d = _parse_surgery(surgery, genus)
    try:
        K0 = Fraction(k0)
    except ValueError:
        raise click.UsageError(f"bad K0 {k0!r}")
    try:
        res = mdl.zoll_besse_evaluate(K0, d)
    except mdl.ModelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"sys {_g(res.sys)}")
    click.echo(f"vol {_g(res.vol)}")
    click.echo(f"ratio {_g(res.ratio)}")


if __name__ == "__main__":
    main()
