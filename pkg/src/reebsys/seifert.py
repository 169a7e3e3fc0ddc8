"""Exact arithmetic on Seifert surgery data.

Surgery data is a genus together with a list of coprime pairs (p, q),
p >= 1. The Euler number, the canonical normalized form and the
equivalence test are all computed with exact rational arithmetic; the
classification conditions are exact identities and would not survive
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class SurgeryDataError(ValueError):
    """Invalid surgery data (non-coprime pair, empty list, bad genus)."""


@dataclass(frozen=True)
class SurgeryData:
    """Genus plus an ordered list of coprime surgery coefficients."""

    genus: int
    coefficients: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.genus < 0:
            raise SurgeryDataError(f"genus must be non-negative, got {self.genus}")
        object.__setattr__(
            self, "coefficients", tuple((int(p), int(q)) for p, q in self.coefficients)
        )
        if not self.coefficients:
            raise SurgeryDataError("coefficient list must be non-empty")
        for p, q in self.coefficients:
            if p < 1:
                raise SurgeryDataError(f"p must be positive, got ({p}, {q})")
            if math.gcd(p, q) != 1:
                raise SurgeryDataError(f"({p}, {q}) is not a coprime pair")


def euler_number(d: SurgeryData) -> Fraction:
    """Euler number -sum(q/p) of the surgery data, exact."""
    return -sum((Fraction(q, p) for p, q in d.coefficients), Fraction(0))


def normalize(d: SurgeryData) -> SurgeryData:
    """Canonical representative of the surgery data.

    Every pair with p >= 2 is reduced to its residue 0 < q < p, the
    reduced pairs are sorted lexicographically, and a single trailing
    integer pair (1, b) absorbs whatever is needed to keep the Euler
    number unchanged. The trailing pair is always present, so the result
    is never empty and two data are equivalent iff their normal forms
    (and genera) coincide.
    """
    reduced = []
    b = Fraction(0)
    for p, q in d.coefficients:
        if p == 1:
            b += q
        else:
            r = q % p  # in (0, p) since gcd(p, q) = 1 and p >= 2
            reduced.append((p, r))
            b += Fraction(q - r, p)
    assert b.denominator == 1
    reduced.sort()
    reduced.append((1, int(b)))
    return SurgeryData(genus=d.genus, coefficients=tuple(reduced))


def equivalent(a: SurgeryData, b: SurgeryData) -> bool:
    """Whether two surgery data describe the same Seifert bundle.

    Same genus, same multiset of non-integer residues q/p mod 1, and the
    same exact coefficient sum; implemented as equality of normal forms.
    """
    return a.genus == b.genus and normalize(a).coefficients == normalize(b).coefficients
