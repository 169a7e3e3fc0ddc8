"""The signed labelled graph of an invariant contact structure.

Vertices are the maximal sign-regions of the moment map, edges the
zero-crossing cylinders separating them. The graph is reconstructed from
the explicit boundary-adjacency ids of a model: the sign-regions are the
connected components of the union of component halves glued along shared
critical circles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ContactModel
from .seifert import normalize


class GraphError(ValueError):
    """Inconsistent adjacency data or an illegal graph operation."""


@dataclass(frozen=True)
class Vertex:
    id: str
    sign: int  # +1 or -1
    labels: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise GraphError(f"vertex sign must be +1 or -1, got {self.sign}")
        for p, q in self.labels:
            if p < 2:
                raise GraphError(f"label ({p}, {q}) must have p >= 2")


@dataclass(frozen=True)
class ContactGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...]  # unordered pairs, parallels allowed

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate vertex ids")
        known = set(ids)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise GraphError(f"edge ({a}, {b}) references unknown vertex")
            if a == b:
                raise GraphError("self-loops are not allowed (bipartiteness)")

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"unknown vertex id {vid!r}")


def is_bipartite(g: ContactGraph) -> bool:
    """True iff the sign labelling is proper on every edge."""
    signs = {v.id: v.sign for v in g.vertices}
    return all(signs[a] != signs[b] for a, b in g.edges)


def lutz_twist(g: ContactGraph, v: str) -> ContactGraph:
    """Attach a fresh opposite-sign leaf vertex to v."""
    base = g.vertex(v)
    existing = {w.id for w in g.vertices}
    n = 0
    while f"lutz{n}" in existing:
        n += 1
    new = Vertex(id=f"lutz{n}", sign=-base.sign)
    return ContactGraph(g.vertices + (new,), g.edges + ((v, new.id),))


def connected_sum(g1: ContactGraph, v1: str, g2: ContactGraph, v2: str) -> ContactGraph:
    """Disjoint union with v1 and v2 merged; requires equal signs."""
    a, b = g1.vertex(v1), g2.vertex(v2)
    if a.sign != b.sign:
        raise GraphError(f"cannot sum vertices of opposite signs ({v1}, {v2})")
    used = {v.id for v in g1.vertices}

    def rename(vid: str) -> str:
        if vid == v2:
            return v1
        new = vid
        while new in used:
            new = new + "'"
        return new

    mapping = {v.id: rename(v.id) for v in g2.vertices}
    merged = Vertex(id=a.id, sign=a.sign, labels=a.labels + b.labels)
    vertices = tuple(v if v.id != v1 else merged for v in g1.vertices) + tuple(
        Vertex(id=mapping[v.id], sign=v.sign, labels=v.labels)
        for v in g2.vertices
        if v.id != v2
    )
    edges = g1.edges + tuple((mapping[x], mapping[y]) for x, y in g2.edges)
    return ContactGraph(vertices, edges)


def build_graph(m: ContactModel) -> ContactGraph:
    """Region graph of a model: one vertex per sign-region, one edge per
    zero-crossing component.

    Regions are computed by union-find on component halves: two halves
    sharing a boundary adjacency id bound the same critical circle, which
    is interior to one region (0 is a regular value, so critical circles
    never sit on a sign wall).
    """
    halves: list[tuple[int, int]] = []  # (component index, sign)
    for i, comp in enumerate(m.components):
        if comp.crosses_zero:
            halves.append((i, -1))
            halves.append((i, +1))
        else:
            sign = 1 if comp.potential.exact_k_min >= 0 else -1
            halves.append((i, sign))

    parent = {h: h for h in halves}

    def find(h):
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    by_id: dict[str, list[tuple[tuple[int, int], float, int]]] = {}
    for i, comp in enumerate(m.components):
        for side, orbit in (("lower", comp.lower), ("upper", comp.upper)):
            if orbit.adjacency_id is None:
                continue
            K = float(orbit.K_crit)
            sign = 1 if K > 0 else -1
            half = (i, sign) if (i, sign) in parent else _only_half(halves, i)
            by_id.setdefault(orbit.adjacency_id, []).append((half, K, orbit.p))
    for aid, users in by_id.items():
        if len(users) > 2:
            raise GraphError(f"adjacency id {aid!r} used by {len(users)} boundaries")
        if len(users) == 2:
            (h1, k1, p1), (h2, k2, p2) = users
            if abs(k1 - k2) > 1e-9 or p1 != p2:
                raise GraphError(f"adjacency id {aid!r} joins mismatched circles")
            union(h1, h2)

    roots = sorted({find(h) for h in halves})
    region_of = {h: find(h) for h in halves}
    region_sign = {}
    for h in halves:
        r = region_of[h]
        s = h[1]
        if r in region_sign and region_sign[r] != s:
            raise GraphError("adjacency data merges regions of opposite sign")
        region_sign[r] = s

    # Singular-orbit labels: one per distinct critical circle with p >= 2,
    # matched to surgery coefficients by stabilizer order.
    pool = list(normalize(m.surgery).coefficients)
    labels: dict = {r: [] for r in roots}
    seen_ids = set()
    for i, comp in enumerate(m.components):
        for orbit in (comp.lower, comp.upper):
            if orbit.p < 2:
                continue
            if orbit.adjacency_id is not None:
                if orbit.adjacency_id in seen_ids:
                    continue
                seen_ids.add(orbit.adjacency_id)
            sign = 1 if float(orbit.K_crit) > 0 else -1
            half = (i, sign) if (i, sign) in parent else _only_half(halves, i)
            q = next((qq for pp, qq in pool if pp == orbit.p), None)
            if q is not None:
                pool.remove((orbit.p, q))
                labels[region_of[half]].append((orbit.p, q))

    names = {r: f"r{j}" for j, r in enumerate(roots)}
    vertices = tuple(
        Vertex(id=names[r], sign=region_sign[r], labels=tuple(sorted(labels[r])))
        for r in roots
    )
    edges = tuple(
        (names[region_of[(i, -1)]], names[region_of[(i, +1)]])
        for i, comp in enumerate(m.components)
        if comp.crosses_zero
    )
    return ContactGraph(vertices, edges)


def _only_half(halves, i):
    for h in halves:
        if h[0] == i:
            return h
    raise GraphError(f"component {i} has no region half")


def to_adjacency_text(g: ContactGraph) -> str:
    """Human-readable adjacency listing."""
    lines = []
    for v in g.vertices:
        nbrs = [b if a == v.id else a for a, b in g.edges if v.id in (a, b)]
        label_txt = "".join(f" ({p},{q})" for p, q in v.labels)
        sign = "+" if v.sign > 0 else "-"
        lines.append(f"{v.id} [{sign}]{label_txt}: {' '.join(nbrs) if nbrs else '-'}")
    return "\n".join(lines)


def to_dot(g: ContactGraph) -> str:
    """dot-format text for external rendering."""
    lines = ["graph contact {"]
    for v in g.vertices:
        sign = "+" if v.sign > 0 else "-"
        label = sign + "".join(f" ({p},{q})" for p, q in v.labels)
        lines.append(f'  "{v.id}" [label="{v.id}: {label}"];')
    for a, b in g.edges:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines)
