"""Randomized corpora: surgery data, validated models, Zoll/Besse data.

Model generators enforce the geometric consistency a genuine contact
form would have and which raw potential data does not: the volume is
lifted (constant shift of the potentials, which raises tau pointwise)
until it clears the orbifold-area floor. Everything downstream - that
the systolic ratio then respects the proven bounds - is computed by the
library under test, not by the generator.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from reebsys import analysis
from reebsys import model as mdl
from reebsys import polyroots as pr
from reebsys import potentials as pot
from reebsys.model import BoundaryOrbit, Component, ContactModel
from reebsys.potentials import Potential
from reebsys.seifert import SurgeryData, euler_number, normalize


# -- surgery data ------------------------------------------------------


def random_surgery(rng, genus=None) -> SurgeryData:
    if genus is None:
        genus = int(rng.integers(0, 3))
    n = int(rng.integers(1, 4))
    pairs = []
    for _ in range(n):
        p = int(rng.integers(1, 8))
        choices = [q for q in range(-10, 11) if q != 0 and np.gcd(p, abs(q)) == 1]
        pairs.append((p, int(rng.choice(choices))))
    return SurgeryData(genus, tuple(pairs))


def scramble(d: SurgeryData, rng) -> SurgeryData:
    """A different description of the same bundle (class-preserving moves)."""
    pairs = list(d.coefficients)
    for _ in range(int(rng.integers(1, 4))):
        move = int(rng.integers(0, 3))
        if move == 0:
            # shift one pair by its p, compensate with an integer pair
            i = int(rng.integers(0, len(pairs)))
            p, q = pairs[i]
            pairs[i] = (p, q + p)
            pairs.append((1, -1))
        elif move == 1:
            # split an integer amount off as a separate (1, b) pair
            pairs.append((1, 2))
            pairs.append((1, -2))
        else:
            order = rng.permutation(len(pairs))
            pairs = [pairs[i] for i in order]
    return SurgeryData(d.genus, tuple(pairs))


def surgery_with_bounded_euler(rng, lo=Fraction(1, 6), hi=Fraction(6)) -> SurgeryData:
    """Random surgery data with |e| in [lo, hi]."""
    while True:
        n = int(rng.integers(0, 3))
        pairs = []
        for _ in range(n):
            p = int(rng.integers(2, 8))
            choices = [q for q in range(1, p) if np.gcd(p, q) == 1]
            pairs.append((p, int(rng.choice(choices))))
        s = sum(Fraction(q, p) for p, q in pairs)
        feasible = [
            b for b in range(-8, 9) if lo <= abs(s + b) <= hi
        ]
        if not feasible:
            continue
        pairs.append((1, int(rng.choice(feasible))))
        return SurgeryData(int(rng.integers(0, 2)), tuple(pairs))


# -- Zoll / Besse inputs ----------------------------------------------


def random_zoll_input(rng):
    """(K0, surgery) with every p_i = 1 and nonzero Euler number."""
    while True:
        n = int(rng.integers(1, 4))
        qs = [int(q) for q in rng.integers(-5, 6, size=n)]
        if sum(qs) != 0:
            break
    K0 = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 20)))
    return K0, SurgeryData(int(rng.integers(0, 3)), tuple((1, q) for q in qs))


def random_besse_input(rng):
    """(K0, surgery) with some p_i >= 2 and nonzero Euler number."""
    while True:
        d = random_surgery(rng)
        if euler_number(d) == 0 or all(p == 1 for p, _ in d.coefficients):
            continue
        K0 = Fraction(int(rng.integers(1, 50)), int(rng.integers(1, 20)))
        return K0, d


# -- validated models --------------------------------------------------


def _lift(J: Potential, lift: Fraction) -> Potential:
    if lift <= 0:
        return J
    pieces = tuple((p[0] + lift, *p[1:]) if p else (lift,) for p in J.piece_coeffs)
    return Potential(J.breakpoints, pieces)


def _reshape_domain(J: Potential, lo: Fraction, hi: Fraction) -> Potential:
    """Affine pullback of J onto [lo, hi]."""
    a, b = J.exact_k_min, J.exact_k_max
    scale = (hi - lo) / (b - a)
    shift = lo - a * scale
    # substitute k -> (k - shift) / scale in each piece
    inv = pr.as_poly([-shift / scale, 1 / scale])
    new_bps = tuple(x * scale + shift for x in J.exact_breakpoints)
    new_pieces = []
    for piece in J.polys:
        acc = ()
        power = pr.as_poly([Fraction(1)])
        for c in piece:
            acc = pr.add(acc, pr.scale(power, c))
            power = pr.mul(power, inv)
        new_pieces.append(acc if acc else (Fraction(0),))
    return Potential(new_bps, tuple(new_pieces))


def positive_k_model(seed: int) -> ContactModel:
    """Validated model with I0 empty (component away from K = 0).

    The potential is lifted until the volume clears the orbifold-area
    floor (min K)^2 |e|, the consistency a genuine positive-K contact
    form has by Stokes on the base.
    """
    rng = np.random.default_rng([seed, 17])
    surgery = surgery_with_bounded_euler(rng)
    e = euler_number(surgery)
    a = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
    width = Fraction(int(rng.integers(1, 9)), 4)
    base = analysis._random_c1_potential(rng, -1, 1)
    J = _reshape_domain(base, a, a + width)
    tmin = pot.tau_min_lower_bound(J)
    lift = max(Fraction(0), -tmin + Fraction(1, 10))
    vol = Fraction(pot.volume_contribution(_lift(J, lift)))
    need = a * a * abs(e)
    if vol < need:
        lift += (need - vol) / width
    J = _lift(J, lift)
    labels = [p for p, _ in normalize(surgery).coefficients if p >= 2]
    p_lo = int(rng.choice(labels)) if labels and rng.random() < 0.5 else 1
    comp = Component(
        J,
        BoundaryOrbit(K_crit=a, p=p_lo),
        BoundaryOrbit(K_crit=a + width),
    )
    return ContactModel(surgery, (comp,))


def crossing_model(seed: int) -> ContactModel:
    """Validated model whose single component crosses K = 0.

    Lifted until both the realizability positivity and the volume floor
    c_max^2 / 80 hold (sys <= c_max via the boundary orbits, so the
    floor is what a bound-respecting geometry requires).
    """
    rng = np.random.default_rng([seed, 23])
    surgery = surgery_with_bounded_euler(rng)
    e = euler_number(surgery)
    c = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 4)))
    base = analysis._random_c1_potential(rng, -1, 1)
    J = _reshape_domain(base, -c, c)
    tmin = pot.tau_min_lower_bound(J)
    lift = max(Fraction(0), -tmin + Fraction(1, 10))
    # Realizability: P(c') = e c' + J(c') + J(-c') >= 0 on [0, c]; a lift
    # L adds 2L to P everywhere.
    pmin = _even_part_min(J, e, c)
    if pmin + 2 * lift < 0:
        lift = max(lift, -pmin / 2 + Fraction(1, 10))
    vol = Fraction(pot.volume_contribution(_lift(J, lift)))
    need = c * c / 80
    if vol < need:
        lift += (need - vol) / (2 * c)
    J = _lift(J, lift)
    comp = Component(
        J,
        BoundaryOrbit(K_crit=-c),
        BoundaryOrbit(K_crit=c),
    )
    return ContactModel(surgery, (comp,))


def _even_part_min(J: Potential, e: Fraction, c: Fraction) -> Fraction:
    """Certified lower bound for e*x + J(x) + J(-x) on [0, c]."""
    cuts = sorted({Fraction(0), c, *(abs(b) for b in J.exact_breakpoints if 0 < abs(b) < c)})
    best = None
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        P = pr.add(
            pr.as_poly([Fraction(0), e]),
            pr.add(
                J.polys[J.piece_index(mid)],
                pr.compose_neg(J.polys[J.piece_index(-mid)]),
            ),
        )
        lo = pr.min_max_brackets(P, a, b)[0]
        best = lo if best is None else min(best, lo)
    return best if best is not None else Fraction(0)


def theorem_wall_model(seed: int) -> ContactModel:
    """Corpus entry for the systolic-bound wall: mixes model shapes."""
    if seed % 3 == 0:
        return positive_k_model(seed)
    return crossing_model(seed)
