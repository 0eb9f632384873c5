import pytest

from orbcheck.orb2d import sphere
from orbcheck.siggraph import Edge, LabeledGraph, TetraPattern, VertexKind, from_tetra
from orbcheck.barrier import (Context, CycleKind, ViolationCase,
                              find_violation, one_cycles)


def tetra(cusp, interior):
    return from_tetra(TetraPattern(sphere(*cusp), interior))


def test_one_cycles_tetra():
    cycles = one_cycles(tetra((2, 3, 6), (2, 2, 3)))
    absolute = [c for c in cycles if c.kind is CycleKind.ABSOLUTE]
    relative = [c for c in cycles if c.kind is CycleKind.RELATIVE]
    assert len(absolute) == 1
    assert set(absolute[0].cells) == {"e12", "e13", "e23"}
    # between each pair of boundary ends there are two simple routes (the
    # direct triangle side and the detour through the third corner)
    assert len(relative) == 6


def test_one_cycles_tree():
    V, E = VertexKind, Edge
    g = LabeledGraph(
        {"c": V.INTERIOR, "t1": V.PERIPHERAL_END, "t2": V.PERIPHERAL_END,
         "t3": V.PERIPHERAL_END},
        [E("a", ("c", "t1"), 2), E("b", ("c", "t2"), 3), E("d", ("c", "t3"), 2)],
        {"c": (("a", 0), ("b", 0), ("d", 0)),
         "t1": (("a", 1),), "t2": (("b", 1),), "t3": (("d", 1),)})
    cycles = one_cycles(g)
    assert all(c.kind is CycleKind.RELATIVE for c in cycles)


def _two_cone_loop(inside: bool):
    """Loop at an interior vertex with a stem to the boundary, plus a
    transverse arc through a puncture placed inside or outside the loop."""
    V, E = VertexKind, Edge
    vertices = {"w": V.INTERIOR, "x0": V.PERIPHERAL_END,
                "x1": V.PUNCTURE_MARK,
                "tL": V.PERIPHERAL_END, "tR": V.PERIPHERAL_END}
    edges = [E("loop", ("w", "w"), 2), E("stem", ("w", "x0"), 3),
             E("hL", ("x1", "tL"), 3, transverse=True),
             E("hR", ("x1", "tR"), 3, transverse=True)]
    rotation = {"w": (("loop", 0), ("loop", 1), ("stem", 0)),
                "x0": (("stem", 1),)}
    mark_inside = {"x1": frozenset({"loop"})} if inside else {}
    return LabeledGraph(vertices, edges, rotation, mark_inside)


def test_two_cone_enclosure():
    ok = _two_cone_loop(inside=True)
    assert find_violation(ok, Context.TWO_CONE_CASE) is None
    bad = _two_cone_loop(inside=False)
    v = find_violation(bad, Context.TWO_CONE_CASE)
    assert v is not None and v.case is ViolationCase.CYCLE_NOT_ENCLOSING_X1


def test_generic_tetra_has_no_violation():
    assert find_violation(tetra((2, 3, 6), (2, 2, 3)), Context.GENERIC) is None


def _disjoint_triangle_and_arc():
    """The arc t1-d-t2 shares no vertex with the triangle a-b-c; the graph
    stays connected through the bridge b-d."""
    from orbcheck.siggraph import embed_in_disk
    V, E = VertexKind, Edge
    vertices = {"a": V.INTERIOR, "b": V.INTERIOR, "c": V.INTERIOR,
                "d": V.INTERIOR,
                "t1": V.PERIPHERAL_END, "t2": V.PERIPHERAL_END,
                "t3": V.PERIPHERAL_END, "t4": V.PERIPHERAL_END}
    edges = [
        E("ab", ("a", "b"), 2), E("bc", ("b", "c"), 2), E("ca", ("c", "a"), 2),
        E("an", ("a", "t3"), 2), E("cn", ("c", "t4"), 2),
        E("p1", ("d", "t1"), 2), E("p2", ("d", "t2"), 2), E("p3", ("d", "b"), 9),
    ]
    rotation = embed_in_disk(vertices, edges)
    assert rotation is not None
    return LabeledGraph(vertices, edges, rotation)


def test_generic_disjoint_pair_is_violation():
    # triangle a-b-c versus the arc t1-d-t2: they share no vertex
    g = _disjoint_triangle_and_arc()
    v = find_violation(g, Context.GENERIC)
    assert v is not None and v.case is ViolationCase.ARC_VS_CYCLE


def test_tripod_context_forbids_cycles():
    from orbcheck.siggraph import embed_in_disk
    V, E = VertexKind, Edge
    # a triangle with one stem to the boundary and legs to the two punctures
    vertices = {"a": V.INTERIOR, "b": V.INTERIOR, "c": V.INTERIOR,
                "x0": V.PERIPHERAL_END,
                "x1": V.PUNCTURE_MARK, "x2": V.PUNCTURE_MARK,
                "uL": V.INTERIOR, "uR": V.INTERIOR,
                "tL": V.PERIPHERAL_END, "tR": V.PERIPHERAL_END}
    plane_edges = [
        E("ab", ("a", "b"), 2), E("bc", ("b", "c"), 2), E("ca", ("c", "a"), 2),
        E("s0", ("a", "x0"), 3), E("s1", ("b", "x1"), 2), E("s2", ("c", "x2"), 2),
    ]
    edges = plane_edges + [
        E("hL1", ("x1", "uL"), 2, transverse=True),
        E("hR1", ("x1", "uR"), 2, transverse=True),
        E("hL2", ("x2", "uL"), 2, transverse=True),
        E("hR2", ("x2", "uR"), 2, transverse=True),
        E("legL", ("uL", "tL"), 3), E("legR", ("uR", "tR"), 3),
    ]
    plane_vertices = {v: vertices[v] for v in ("a", "b", "c", "x0", "x1", "x2")}
    rotation = embed_in_disk(plane_vertices, plane_edges)
    assert rotation is not None
    g = LabeledGraph(vertices, edges, rotation)
    v = find_violation(g, Context.TRIPOD_CASE)
    assert v is not None
    assert v.case in (ViolationCase.CYCLE_BOTH_OR_NEITHER_PUNCTURE,
                      ViolationCase.CYCLE_ONE_PUNCTURE)


def test_context_mark_mismatch():
    g = tetra((2, 3, 6), (2, 2, 3))
    with pytest.raises(ValueError):
        find_violation(g, Context.TRIPOD_CASE)
    with pytest.raises(ValueError):
        find_violation(g, Context.TWO_CONE_CASE)


def test_generic_symmetric_under_listing_order():
    # presence of a violation does not depend on enumeration order: assert
    # the violating pair is reported on the canonical list and is disjoint
    g = _disjoint_triangle_and_arc()
    cycles = one_cycles(g)
    v = find_violation(g, Context.GENERIC)
    arc = cycles[v.cycle_ids[0]]
    cyc = cycles[v.cycle_ids[1]]
    assert not (set(arc.vertices) & set(cyc.vertices))
    assert arc.kind is CycleKind.RELATIVE and cyc.kind is CycleKind.ABSOLUTE
