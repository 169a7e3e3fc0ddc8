"""Structured-text (JSON-compatible) model and family files.

Exact rationals are written as "p/q" strings and parsed back to
``Fraction``, so the exact-arithmetic path survives a round trip; floats
stay decimal literals. ``serialize_model(parse_model(text))`` is
byte-identical for canonical files (the serializer's own output).

Family files extend the model format with a ``parameters`` array; any
numeric leaf of a family file may instead be a string holding an affine
expression in the parameter names, e.g. ``"1/2 + 3*c - t/4"``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .model import BoundaryOrbit, Component, ContactModel
from .potentials import Potential
from .seifert import SurgeryData


class ModelIOError(ValueError):
    """Malformed model/family file; message carries the field path."""


# -- numbers and affine expressions ------------------------------------


def _encode_number(x):
    if isinstance(x, bool):
        raise ModelIOError(f"boolean where a number was expected: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


_TERM_RE = re.compile(r"[+-]?[^+-]+")


def _parse_affine(s: str, where: str):
    """Parse an affine expression into (constant, {name: coefficient}).

    Grammar: sum of terms; a term is a rational, a name, or a product /
    quotient of a name with a rational (``3*c``, ``c/4``).
    """
    const = Fraction(0)
    coeffs: dict[str, Fraction] = {}
    body = s.replace(" ", "")
    if not body:
        raise ModelIOError(f"{where}: empty expression")
    pos = 0
    for m in _TERM_RE.finditer(body):
        if m.start() != pos:
            raise ModelIOError(f"{where}: cannot parse {s!r}")
        pos = m.end()
        term = m.group(0)
        sign = Fraction(1)
        if term[0] in "+-":
            sign = Fraction(-1) if term[0] == "-" else Fraction(1)
            term = term[1:]
        name = None
        scalar = sign
        for factor in term.split("*"):
            if "/" in factor:
                num, den = factor.split("/", 1)
                if _is_name(num):
                    name = _one_name(name, num, s, where)
                    scalar /= _as_fraction(den, where, s)
                else:
                    scalar *= _as_fraction(num, where, s) / _as_fraction(den, where, s)
            elif _is_name(factor):
                name = _one_name(name, factor, s, where)
            else:
                scalar *= _as_fraction(factor, where, s)
        if name is None:
            const += scalar
        else:
            coeffs[name] = coeffs.get(name, Fraction(0)) + scalar
    if pos != len(body):
        raise ModelIOError(f"{where}: cannot parse {s!r}")
    return const, coeffs


def _is_name(tok: str) -> bool:
    return bool(tok) and (tok[0].isalpha() or tok[0] == "_")


def _one_name(existing, new, expr, where):
    if existing is not None:
        raise ModelIOError(f"{where}: {expr!r} is not affine (product of parameters)")
    return new


def _as_fraction(tok: str, where: str, expr: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ModelIOError(f"{where}: bad number {tok!r} in {expr!r}") from None


def _decode_number(x, where: str, env: dict | None = None):
    """A numeric leaf: int, float, rational string, or affine expression."""
    if isinstance(x, bool):
        raise ModelIOError(f"{where}: boolean where a number was expected")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        const, coeffs = _parse_affine(x, where)
        if not coeffs:
            return const
        if env is None:
            raise ModelIOError(f"{where}: parameter reference {x!r} outside a family")
        val = const
        inexact = False
        for name, coef in coeffs.items():
            if name not in env:
                raise ModelIOError(f"{where}: unknown parameter {name!r}")
            v = env[name]
            inexact = inexact or isinstance(v, float)
            val = (float(val) if isinstance(v, float) else val) + coef * v
        return float(val) if inexact else val
    raise ModelIOError(f"{where}: expected a number, got {type(x).__name__}")


# -- model documents ---------------------------------------------------


def _expect(doc, key, where, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ModelIOError(f"{where}: missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise ModelIOError(f"{where}.{key}: expected {kind.__name__}")
    return v


def decode_model(doc: dict, env: dict | None = None) -> ContactModel:
    """Build a model from a parsed document, substituting parameters."""
    genus = _expect(doc, "genus", "model", int)
    surgeries = _expect(doc, "surgeries", "model", list)
    pairs = []
    for i, pq in enumerate(surgeries):
        if not (isinstance(pq, list) and len(pq) == 2):
            raise ModelIOError(f"model.surgeries[{i}]: expected [p, q]")
        pairs.append((int(pq[0]), int(pq[1])))
    try:
        surgery = SurgeryData(genus, tuple(pairs))
    except ValueError as exc:
        raise ModelIOError(f"model.surgeries: {exc}") from None
    comps = []
    for i, cdoc in enumerate(_expect(doc, "components", "model", list)):
        comps.append(_decode_component(cdoc, f"model.components[{i}]", env))
    tame = doc.get("tame", True)
    if not isinstance(tame, bool):
        raise ModelIOError("model.tame: expected a boolean")
    try:
        return ContactModel(surgery, tuple(comps), tame=tame)
    except ValueError as exc:
        raise ModelIOError(f"model: {exc}") from None


def _decode_component(cdoc, where: str, env) -> Component:
    k_min = _decode_number(_expect(cdoc, "k_min", where), f"{where}.k_min", env)
    k_max = _decode_number(_expect(cdoc, "k_max", where), f"{where}.k_max", env)
    bps = cdoc.get("breakpoints")
    if bps is None:
        bps = [k_min, k_max]
    else:
        bps = [
            _decode_number(b, f"{where}.breakpoints[{j}]", env)
            for j, b in enumerate(bps)
        ]
        if bps and (Fraction(bps[0]) != Fraction(k_min) or Fraction(bps[-1]) != Fraction(k_max)):
            raise ModelIOError(f"{where}: breakpoints do not span [k_min, k_max]")
    pieces = []
    for j, piece in enumerate(_expect(cdoc, "pieces", where, list)):
        if not isinstance(piece, list):
            raise ModelIOError(f"{where}.pieces[{j}]: expected a coefficient array")
        pieces.append(
            tuple(
                _decode_number(c, f"{where}.pieces[{j}][{m}]", env)
                for m, c in enumerate(piece)
            )
        )
    try:
        J = Potential(tuple(bps), tuple(pieces))
    except ValueError as exc:
        raise ModelIOError(f"{where}: {exc}") from None
    lower = _decode_orbit(_expect(cdoc, "lower", where, dict), f"{where}.lower", env)
    upper = _decode_orbit(_expect(cdoc, "upper", where, dict), f"{where}.upper", env)
    return Component(J, lower, upper)


def _decode_orbit(odoc, where: str, env) -> BoundaryOrbit:
    K = _decode_number(_expect(odoc, "K", where), f"{where}.K", env)
    p = odoc.get("p", 1)
    if not isinstance(p, int):
        raise ModelIOError(f"{where}.p: expected an integer")
    aid = odoc.get("id")
    if aid is not None and not isinstance(aid, str):
        raise ModelIOError(f"{where}.id: expected a string or null")
    try:
        return BoundaryOrbit(K_crit=K, p=p, adjacency_id=aid)
    except ValueError as exc:
        raise ModelIOError(f"{where}: {exc}") from None


def parse_model(text: str) -> ContactModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelIOError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return decode_model(doc)


def model_document(m: ContactModel) -> dict:
    """Canonical plain-data form of a model (fixed key order)."""
    return {
        "genus": m.surgery.genus,
        "surgeries": [[p, q] for p, q in m.surgery.coefficients],
        "components": [
            {
                "k_min": _encode_number(c.potential.exact_k_min),
                "k_max": _encode_number(c.potential.exact_k_max),
                "breakpoints": [_encode_number(b) for b in c.potential.breakpoints],
                "pieces": [
                    [_encode_number(x) for x in piece]
                    for piece in c.potential.piece_coeffs
                ],
                "lower": _orbit_document(c.lower),
                "upper": _orbit_document(c.upper),
            }
            for c in m.components
        ],
        "tame": m.tame,
    }


def _orbit_document(o: BoundaryOrbit) -> dict:
    return {"K": _encode_number(o.K_crit), "p": o.p, "id": o.adjacency_id}


def serialize_model(m: ContactModel) -> str:
    return json.dumps(model_document(m), indent=2) + "\n"


def load_model(path) -> ContactModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def save_model(m: ContactModel, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_model(m))


# -- family documents --------------------------------------------------


def parse_family_document(text: str) -> tuple[dict, list[tuple[str, float, float]]]:
    """Parse a family file: the raw model skeleton plus the parameter box.

    Returns (document, [(name, lo, hi), ...]); the document still holds
    its affine expressions, to be decoded per parameter vector with
    ``decode_model(doc, env)``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelIOError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    params = _expect(doc, "parameters", "family", list)
    box = []
    seen = set()
    for i, pdoc in enumerate(params):
        where = f"family.parameters[{i}]"
        name = _expect(pdoc, "name", where, str)
        if not _is_name(name):
            raise ModelIOError(f"{where}: bad parameter name {name!r}")
        if name in seen:
            raise ModelIOError(f"{where}: duplicate parameter {name!r}")
        seen.add(name)
        lo = float(_decode_number(_expect(pdoc, "lo", where), f"{where}.lo"))
        hi = float(_decode_number(_expect(pdoc, "hi", where), f"{where}.hi"))
        if not lo < hi:
            raise ModelIOError(f"{where}: empty box [{lo}, {hi}]")
        box.append((name, lo, hi))
    skeleton = {k: v for k, v in doc.items() if k != "parameters"}
    return skeleton, box


def load_family_document(path):
    with open(path, encoding="utf-8") as fh:
        return parse_family_document(fh.read())
