"""Pruning rules for singular graphs embedded in the reflection disk.

Two disjoint 1-cycles of the singular set that are separated by an embedded
sphere force an incompressible 2-suborbifold, which the classification
hypotheses forbid.  The sphere itself is never constructed: disjointness in
the disk together with the puncture-position side conditions is the entire
combinatorial content, and it is checked in three calibrated contexts.

* Generic: a boundary-to-boundary arc and an absolute cycle sharing no
  vertex can always be separated.
* TripodCase (two disk punctures): the off-disk part already contains a
  circle through both punctures, so any cycle inside the disk is separable
  from something; the disk part must be a forest.
* TwoConeCase (one disk puncture): a cycle is only allowed if the disk it
  bounds contains the puncture, and two cycles are one too many.

Graphs outside these calibrated shapes are not judged here; the Generic rule
is the only one applied to them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .siggraph import LabeledGraph, VertexKind


class CycleKind(enum.Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"


class Context(enum.Enum):
    GENERIC = "generic"
    TRIPOD_CASE = "tripod"
    TWO_CONE_CASE = "two-cone"


class ViolationCase(enum.Enum):
    ARC_VS_CYCLE = "ArcVsCycle"
    CYCLE_BOTH_OR_NEITHER_PUNCTURE = "CycleBothOrNeitherPuncture"
    CYCLE_ONE_PUNCTURE = "CycleOnePuncture"
    CYCLE_NOT_ENCLOSING_X1 = "CycleNotEnclosingX1"


@dataclass(frozen=True)
class OneCycle:
    kind: CycleKind
    cells: tuple[str, ...]            # edge ids along the cycle or arc
    vertices: tuple[str, ...]
    encloses: frozenset[str] = frozenset()   # puncture marks inside (absolute)


@dataclass(frozen=True)
class BarrierViolation:
    cycle_ids: tuple[int, ...]        # indices into one_cycles(g)
    case: ViolationCase


def _in_disk_adjacency(g: LabeledGraph):
    verts, edges = g.in_disk_subgraph()
    adj: dict[str, list] = {v: [] for v in verts}
    for e in edges:
        a, b = e.ends
        adj[a].append((e.id, b))
        adj[b].append((e.id, a))
    return verts, edges, adj


def _simple_cycles(g: LabeledGraph):
    """All simple closed edge-paths of the in-disk subgraph, as edge sets.

    Loops are length-one cycles and parallel pairs length-two ones; these
    graphs are tiny, so plain path extension with a canonical start is used.
    """
    verts, edges, adj = _in_disk_adjacency(g)
    cycles = set()
    order = {v: i for i, v in enumerate(sorted(verts))}

    def extend(start, current, used_edges, visited):
        for eid, w in sorted(adj[current]):
            if eid in used_edges:
                continue
            if w == start and len(used_edges) >= 0:
                cycles.add(frozenset(used_edges | {eid}))
                continue
            if w in visited or order[w] < order[start]:
                continue
            extend(start, w, used_edges | {eid}, visited | {w})

    for v in sorted(verts):
        extend(v, v, frozenset(), {v})
    out = []
    for cyc in cycles:
        vs = set()
        for eid in cyc:
            vs.update(g.edges[eid].ends)
        out.append((cyc, frozenset(vs)))
    return out


def _simple_arcs(g: LabeledGraph):
    """Simple boundary-to-boundary edge-paths (endpoints peripheral ends)."""
    verts, edges, adj = _in_disk_adjacency(g)
    boundary = sorted(v for v in verts
                      if g.vertices[v] is VertexKind.PERIPHERAL_END)
    arcs = []

    def extend(start, current, path_edges, visited):
        for eid, w in sorted(adj[current]):
            if eid in path_edges:
                continue
            if g.vertices.get(w) is VertexKind.PERIPHERAL_END:
                if w != start and w > start:
                    arcs.append((tuple(path_edges) + (eid,),
                                 frozenset(visited | {w})))
                continue
            if w in visited:
                continue
            extend(start, w, path_edges + [eid], visited | {w})

    for b in boundary:
        extend(b, b, [], {b})
    # dedupe by edge set (an arc traversed from either end is one arc)
    seen = set()
    out = []
    for cells, vs in arcs:
        key = frozenset(cells)
        if key not in seen:
            seen.add(key)
            out.append((cells, vs))
    return out


def one_cycles(g: LabeledGraph) -> list[OneCycle]:
    """All simple absolute cycles and boundary-to-boundary arcs of the
    in-disk part, cycles annotated with the puncture marks they enclose."""
    marks = g.puncture_marks()
    out = []
    for cyc, vs in _simple_cycles(g):
        enclosed = frozenset(m for m in marks if g.mark_enclosed_by(m, cyc))
        out.append(OneCycle(CycleKind.ABSOLUTE, tuple(sorted(cyc)),
                            tuple(sorted(vs)), enclosed))
    for cells, vs in _simple_arcs(g):
        out.append(OneCycle(CycleKind.RELATIVE, tuple(sorted(cells)),
                            tuple(sorted(vs))))
    return sorted(out, key=lambda c: (c.kind.value, len(c.cells), c.cells))


def find_violation(g: LabeledGraph, context: Context) -> Optional[BarrierViolation]:
    """First violation of the context's rule, in canonical order, or None."""
    marks = g.puncture_marks()
    if context is Context.TRIPOD_CASE and len(marks) != 2:
        raise ValueError("tripod context expects exactly two puncture marks")
    if context is Context.TWO_CONE_CASE and len(marks) != 1:
        raise ValueError("two-cone context expects exactly one puncture mark")

    cycles = one_cycles(g)
    absolute = [(i, c) for i, c in enumerate(cycles) if c.kind is CycleKind.ABSOLUTE]
    relative = [(i, c) for i, c in enumerate(cycles) if c.kind is CycleKind.RELATIVE]

    if context is Context.GENERIC:
        for i, arc in relative:
            for j, cyc in absolute:
                if not set(arc.vertices) & set(cyc.vertices):
                    return BarrierViolation((i, j), ViolationCase.ARC_VS_CYCLE)
        return None

    if context is Context.TRIPOD_CASE:
        # the disk part must be a forest: every cycle has a separating sphere,
        # which side depending on how many punctures its disk holds
        for j, cyc in absolute:
            n = len(cyc.encloses)
            case = (ViolationCase.CYCLE_ONE_PUNCTURE if n == 1
                    else ViolationCase.CYCLE_BOTH_OR_NEITHER_PUNCTURE)
            return BarrierViolation((j,), case)
        return None

    if context is Context.TWO_CONE_CASE:
        mark = marks[0]
        for j, cyc in absolute:
            if mark not in cyc.encloses:
                return BarrierViolation((j,), ViolationCase.CYCLE_NOT_ENCLOSING_X1)
        # nested cycles both circling the puncture are still separable
        for (j1, c1), (j2, c2) in _pairs(absolute):
            if not set(c1.vertices) & set(c2.vertices):
                return BarrierViolation(
                    (j1, j2), ViolationCase.CYCLE_BOTH_OR_NEITHER_PUNCTURE)
        return None

    raise ValueError(f"unknown context {context}")


def _pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]
