from fractions import Fraction

import pytest

from reebsys import graph as g
from reebsys.graph import ContactGraph, GraphError, Vertex
from reebsys.model import BoundaryOrbit, Component, ContactModel
from reebsys.potentials import polynomial_potential
from reebsys.seifert import SurgeryData

F = Fraction


def two_vertex_graph():
    return ContactGraph(
        (Vertex("a", +1), Vertex("b", -1)),
        (("a", "b"),),
    )


class TestStructure:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(GraphError):
            ContactGraph((Vertex("a", 1), Vertex("a", -1)), ())

    def test_self_loop_rejected(self):
        with pytest.raises(GraphError):
            ContactGraph((Vertex("a", 1),), (("a", "a"),))

    def test_dangling_edge_rejected(self):
        with pytest.raises(GraphError):
            ContactGraph((Vertex("a", 1),), (("a", "b"),))

    def test_label_needs_p_at_least_2(self):
        with pytest.raises(GraphError):
            Vertex("a", 1, labels=((1, 1),))

    def test_bipartite(self):
        assert g.is_bipartite(two_vertex_graph())
        bad = ContactGraph((Vertex("a", 1), Vertex("b", 1)), (("a", "b"),))
        assert not g.is_bipartite(bad)


class TestOperations:
    def test_lutz_twist_adds_opposite_leaf(self):
        gr = two_vertex_graph()
        gr2 = g.lutz_twist(gr, "a")
        assert len(gr2.vertices) == 3
        leaf = gr2.vertex("lutz0")
        assert leaf.sign == -1
        assert ("a", "lutz0") in gr2.edges
        assert g.is_bipartite(gr2)

    def test_lutz_twist_fresh_name(self):
        gr = g.lutz_twist(two_vertex_graph(), "a")
        gr = g.lutz_twist(gr, "a")
        names = {v.id for v in gr.vertices}
        assert "lutz1" in names

    def test_connected_sum_merges_same_sign(self):
        g1 = two_vertex_graph()
        g2 = ContactGraph(
            (Vertex("a", +1, labels=((3, 1),)), Vertex("c", -1)),
            (("a", "c"),),
        )
        s = g.connected_sum(g1, "a", g2, "a")
        assert len(s.vertices) == 3
        merged = s.vertex("a")
        assert merged.labels == ((3, 1),)
        assert g.is_bipartite(s)

    def test_connected_sum_opposite_signs_rejected(self):
        g1 = two_vertex_graph()
        with pytest.raises(GraphError):
            g.connected_sum(g1, "a", two_vertex_graph(), "b")

    def test_connected_sum_renames_collisions(self):
        g1 = two_vertex_graph()
        s = g.connected_sum(g1, "a", two_vertex_graph(), "a")
        names = {v.id for v in s.vertices}
        assert "b'" in names


class TestBuildGraph:
    def test_crossing_component_two_regions(self):
        J = polynomial_potential([1], -1, 1)
        comp = Component(J, BoundaryOrbit(K_crit=-1), BoundaryOrbit(K_crit=1))
        m = ContactModel(SurgeryData(0, ((1, 1),)), (comp,))
        gr = g.build_graph(m)
        assert len(gr.vertices) == 2
        assert len(gr.edges) == 1
        assert {v.sign for v in gr.vertices} == {-1, +1}
        assert g.is_bipartite(gr)

    def test_glued_components_share_region(self):
        J1 = polynomial_potential([1], -1, 1)
        J2 = polynomial_potential([1], 1, 2)
        c1 = Component(
            J1, BoundaryOrbit(K_crit=-1), BoundaryOrbit(K_crit=1, adjacency_id="top")
        )
        c2 = Component(
            J2, BoundaryOrbit(K_crit=1, adjacency_id="top"), BoundaryOrbit(K_crit=2)
        )
        m = ContactModel(SurgeryData(0, ((1, 1),)), (c1, c2))
        gr = g.build_graph(m)
        # positive half of c1 and all of c2 are one region
        assert len(gr.vertices) == 2
        assert len(gr.edges) == 1

    def test_singular_label_attached(self):
        J = polynomial_potential([1], 1, 2)
        comp = Component(J, BoundaryOrbit(K_crit=1, p=3), BoundaryOrbit(K_crit=2))
        m = ContactModel(SurgeryData(0, ((3, 2), (1, 1))), (comp,))
        gr = g.build_graph(m)
        (v,) = gr.vertices
        assert v.labels == ((3, 2),)

    def test_overused_adjacency_id_rejected(self):
        J = polynomial_potential([1], 1, 2)
        comps = tuple(
            Component(
                J,
                BoundaryOrbit(K_crit=1, adjacency_id="x"),
                BoundaryOrbit(K_crit=2),
            )
            for _ in range(3)
        )
        m = ContactModel(SurgeryData(0, ((1, 1),)), comps)
        with pytest.raises(GraphError):
            g.build_graph(m)

    def test_outputs_render(self):
        gr = two_vertex_graph()
        txt = g.to_adjacency_text(gr)
        assert "a [+]" in txt and "b [-]" in txt
        dot = g.to_dot(gr)
        assert dot.startswith("graph contact {") and '"a" -- "b";' in dot
