import itertools

import pytest

from orbcheck.orb2d import GeometryClass, geometry_type, sphere, euclidean_turnovers
from orbcheck.siggraph import (Edge, LabeledGraph, TetraPattern, VertexKind,
                               ambient_involutions, check_spherical_links,
                               cusp_cross_section, dump_graph, from_tetra,
                               load_graph, quotient_by_involution, symmetries,
                               vertex_link)


def tetra(cusp, interior):
    return from_tetra(TetraPattern(sphere(*cusp), interior))


def test_from_tetra_structure():
    g = tetra((2, 3, 6), (2, 2, 3))
    assert len(g.edges) == 6
    assert cusp_cross_section(g) == sphere(2, 3, 6)
    assert g.genus_zero()


def test_from_tetra_links():
    g = tetra((3, 3, 3), (2, 2, 2))
    for v in ("v1", "v2", "v3"):
        assert vertex_link(g, v) == sphere(3, 2, 2)


def test_whitehead_pattern_links():
    # survivor labeling: the 3 on an edge incident to the 2-cusp corner
    g = tetra((2, 4, 4), (2, 2, 3))
    assert vertex_link(g, "v1") == sphere(2, 2, 3)
    assert check_spherical_links(g)


def test_vertex_link_examples():
    g = tetra((2, 3, 6), (2, 2, 3))
    # v3 carries the peripheral 6; its triangle edges are the two 2s
    assert vertex_link(g, "v3") == sphere(6, 2, 2)
    assert vertex_link(g, "v2") == sphere(3, 2, 3)
    with pytest.raises(ValueError):
        vertex_link(g, "t1")


def test_check_spherical_links_cases():
    assert check_spherical_links(tetra((2, 3, 6), (2, 2, 3)))
    # a 3 adjacent to the peripheral 6 gives a Euclidean link S2(6,3,2)
    assert not check_spherical_links(tetra((2, 3, 6), (3, 2, 2)))
    # S2(3,2,6) at the peripheral-3 vertex
    assert not check_spherical_links(tetra((2, 3, 6), (2, 2, 6)))


def test_dihedral_links_always_spherical():
    for n in range(2, 13):
        assert geometry_type(sphere(2, 2, n)) is GeometryClass.SPHERICAL


def test_cusp_round_trip_all_turnovers():
    for cusp in euclidean_turnovers():
        for interior in itertools.product(range(2, 9), repeat=3):
            g = from_tetra(TetraPattern(cusp, interior))
            assert cusp_cross_section(g) == cusp


def test_sphericity_forces_paper_labels_on_236():
    # survivors of the link filter are exactly: both edges at the 6 labeled
    # 2 and the third labeled 2..5
    for interior in itertools.product(range(2, 13), repeat=3):
        g = tetra((2, 3, 6), interior)
        l_bc, l_ca, l_ab = interior
        expected = (l_bc == 2 and l_ca == 2 and l_ab <= 5)
        assert check_spherical_links(g) == expected, interior


def test_symmetries_examples():
    # (3,3,3; 2,2,k), k != 2: one involution exchanging the 2-labeled edges
    for k in (3, 4, 5):
        syms = symmetries(tetra((3, 3, 3), (2, 2, k)))
        assert len(syms) == 1
        em = syms[0].emap()
        assert em["e23"] == "e13" and em["e13"] == "e23"
    # asymmetric survivor has none
    assert symmetries(tetra((2, 3, 6), (2, 2, 3))) == []
    # (2,4,4; m,k,k): the two 4-corners swap
    syms = symmetries(tetra((2, 4, 4), (3, 2, 2)))
    vm = [s.vmap() for s in syms]
    assert any(m["v2"] == "v3" and m["v3"] == "v2" for m in vm)


def test_symmetries_preserve_kinds_and_labels():
    for cusp, interior in [((3, 3, 3), (2, 2, 3)), ((2, 4, 4), (3, 2, 2)),
                           ((3, 3, 3), (2, 2, 2))]:
        g = tetra(cusp, interior)
        for s in symmetries(g):
            vm, em = s.vmap(), s.emap()
            for v, kind in g.vertices.items():
                assert g.vertices[vm[v]] is kind
            for e, edge in g.edges.items():
                assert g.edges[em[e]].label == edge.label
                assert g.edges[em[e]].transverse == edge.transverse


def test_quotient_examples():
    g = tetra((3, 3, 3), (2, 2, 3))
    q, prov = quotient_by_involution(g, symmetries(g)[0])
    assert cusp_cross_section(q) == sphere(2, 3, 6)
    assert q.is_isomorphic(tetra((2, 3, 6), (2, 2, 3)))

    g2 = tetra((3, 3, 3), (2, 2, 2))
    syms = symmetries(g2)
    assert len(syms) == 3
    for s in syms:
        q, _ = quotient_by_involution(g2, s)
        assert cusp_cross_section(q) == sphere(2, 3, 6)


def test_quotient_rejects_identity():
    from orbcheck.siggraph import Involution
    g = tetra((3, 3, 3), (2, 2, 3))
    ident = Involution(tuple((v, v) for v in sorted(g.vertices)),
                       tuple((e, e) for e in sorted(g.edges)), False)
    with pytest.raises(ValueError):
        quotient_by_involution(g, ident)


def test_quotient_rejects_foreign_map():
    g = tetra((2, 3, 6), (2, 2, 3))
    other = symmetries(tetra((3, 3, 3), (2, 2, 4)))[0]
    with pytest.raises(ValueError):
        quotient_by_involution(g, other)


def test_quotient_cell_count():
    # |cells(g)| = 2 * |free quotient cells| + |invariant source cells|
    g = tetra((3, 3, 3), (2, 2, 5))
    tau = symmetries(g)[0]
    q, prov = quotient_by_involution(g, tau)
    free = [c for c, src in prov.items() if len(src) == 2]
    fixed_sources = {src[0] for c, src in prov.items() if len(src) == 1}
    assert len(g.cells()) == 2 * len(free) + len(fixed_sources)


def test_serialization_round_trip_bit_exact():
    for cusp, interior in [((2, 3, 6), (2, 2, 3)), ((2, 4, 4), (2, 2, 3)),
                           ((3, 3, 3), (2, 2, 2))]:
        g = tetra(cusp, interior)
        text = dump_graph(g)
        again = dump_graph(load_graph(text))
        assert text == again


def test_serialization_transverse_and_marks():
    vertices = {"m": VertexKind.PUNCTURE_MARK,
                "tL": VertexKind.PERIPHERAL_END,
                "tR": VertexKind.PERIPHERAL_END}
    edges = [Edge("hL", ("m", "tL"), 4, transverse=True),
             Edge("hR", ("m", "tR"), 4, transverse=True)]
    g = LabeledGraph(vertices, edges)
    text = dump_graph(g)
    assert "transverse" in text
    g2 = load_graph(text)
    assert dump_graph(g2) == text
    assert cusp_cross_section(g2) == sphere(4, 4)


def test_validation_errors():
    with pytest.raises(ValueError):
        # interior vertex of valence 1
        LabeledGraph({"a": VertexKind.INTERIOR, "t": VertexKind.PERIPHERAL_END},
                     [Edge("e", ("a", "t"), 2)])
    with pytest.raises(ValueError):
        Edge("e", ("a", "b"), 1)
    with pytest.raises(ValueError):
        # disconnected
        LabeledGraph({"a": VertexKind.PERIPHERAL_END,
                      "b": VertexKind.PERIPHERAL_END,
                      "c": VertexKind.PERIPHERAL_END,
                      "d": VertexKind.PERIPHERAL_END},
                     [Edge("e1", ("a", "b"), 2), Edge("e2", ("c", "d"), 2)])


def test_ambient_involutions_pure_disk_graph():
    # a graph lying in the disk always admits the side-swapping reflection
    g = tetra((2, 3, 6), (2, 2, 3))
    amb = ambient_involutions(g)
    assert any(a.orientation_reversing for a in amb)
    # and the asymmetric labeling admits no orientation-preserving involution
    assert not any(not a.orientation_reversing for a in amb)
