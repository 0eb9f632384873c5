"""Labeled embedded graphs modeling singular loci of one-cusped orientable
3-orbifolds whose underlying space is a ball.

The singular set is a trivalent graph.  Most of it lies in a properly
embedded reflection disk; the part of the graph inside the disk carries a
rotation system (a cyclic order of edge-ends at each vertex), which is all
the embedding data the case analyses need.  Edges may also leave the disk:

* an edge-end not listed in any rotation is an off-disk end, living on one
  of the two sides of the disk;
* a ``PUNCTURE_MARK`` vertex records a point where the singular set meets
  the disk transversely.  It carries exactly two off-disk ends on opposite
  sides (the two halves of the transverse arc) and at most one in-disk end.
  With an in-disk end it is a genuine trivalent vertex of the singular set;
  with valence two it only subdivides a transverse arc, and its position is
  recorded by naming the enclosing in-disk cycle.

Peripheral edges run into the cusp; the ideal endpoint is represented by a
valence-one ``PERIPHERAL_END`` vertex carrying no further structure, so the
cusp cross-section reads off as the multiset of labels at peripheral ends.

Graphs are immutable after construction.  Vertex and edge ids are strings;
all derived data (sides, faces, canonical forms) is computed on demand and
cached.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .orb2d import GeometryClass, TwoOrbifold, geometry_type, sphere, is_euclidean_turnover


class VertexKind(enum.Enum):
    INTERIOR = "interior"
    PERIPHERAL_END = "peripheral"
    PUNCTURE_MARK = "puncture"


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    label: int
    transverse: bool = False

    def __post_init__(self):
        if self.label < 2:
            raise ValueError(f"edge {self.id}: label must be >= 2")

    def other(self, v: str) -> str:
        a, b = self.ends
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} not an endpoint of edge {self.id}")


# an edge-end: (edge id, slot 0 or 1)
EndRef = tuple[str, int]


class LabeledGraph:
    def __init__(self, vertices, edges, rotation=None, mark_inside=None):
        """vertices: {id: VertexKind}; edges: iterable of Edge;
        rotation: {vertex id: tuple of (edge id, slot)} for in-disk ends;
        mark_inside: {mark id: frozenset of edge ids} for valence-two marks,
        naming the cycle whose disk contains the crossing point.
        """
        self.vertices = dict(vertices)
        self.edges = {e.id: e for e in edges}
        self.rotation = {v: tuple(r) for v, r in (rotation or {}).items()}
        self.mark_inside = {m: frozenset(c) for m, c in (mark_inside or {}).items()}
        self._canonical = None
        self._sides = None
        self._faces = None
        self._validate()

    # -- structure ---------------------------------------------------------

    def ends_at(self, v: str) -> list[EndRef]:
        out = []
        for e in self.edges.values():
            for slot in (0, 1):
                if e.ends[slot] == v:
                    out.append((e.id, slot))
        return sorted(out)

    def valence(self, v: str) -> int:
        return len(self.ends_at(v))

    def incident_labels(self, v: str) -> tuple[int, ...]:
        return tuple(sorted(self.edges[e].label for e, _ in self.ends_at(v)))

    def in_disk_ends(self, v: str) -> tuple[EndRef, ...]:
        return self.rotation.get(v, ())

    def is_in_disk_end(self, end: EndRef) -> bool:
        eid, slot = end
        v = self.edges[eid].ends[slot]
        return end in self.rotation.get(v, ())

    def peripheral_ends(self) -> list[str]:
        return sorted(v for v, k in self.vertices.items()
                      if k is VertexKind.PERIPHERAL_END)

    def puncture_marks(self) -> list[str]:
        return sorted(v for v, k in self.vertices.items()
                      if k is VertexKind.PUNCTURE_MARK)

    def cells(self) -> list[str]:
        return sorted("v:" + v for v in self.vertices) + \
               sorted("e:" + e for e in self.edges)

    def _validate(self):
        for e in self.edges.values():
            for v in e.ends:
                if v not in self.vertices:
                    raise ValueError(f"edge {e.id} touches unknown vertex {v}")
        for v, kind in self.vertices.items():
            val = self.valence(v)
            if kind is VertexKind.INTERIOR and val != 3:
                raise ValueError(f"interior vertex {v} has valence {val}, want 3")
            if kind is VertexKind.PERIPHERAL_END and val != 1:
                raise ValueError(f"peripheral end {v} has valence {val}, want 1")
            if kind is VertexKind.PUNCTURE_MARK:
                ends = self.ends_at(v)
                off = [e for e in ends if e not in self.rotation.get(v, ())]
                if len(off) != 2 or val not in (2, 3):
                    raise ValueError(
                        f"puncture mark {v} needs exactly two transverse "
                        f"half-ends and valence 2 or 3")
        for v, rot in self.rotation.items():
            if v not in self.vertices:
                raise ValueError(f"rotation given for unknown vertex {v}")
            seen = set()
            for end in rot:
                eid, slot = end
                if eid not in self.edges or self.edges[eid].ends[slot] != v:
                    raise ValueError(f"rotation at {v} lists foreign end {end}")
                if end in seen:
                    raise ValueError(f"rotation at {v} repeats {end}")
                seen.add(end)
        for e in self.edges.values():
            in_disk = [self.is_in_disk_end((e.id, s)) for s in (0, 1)]
            if e.transverse and any(in_disk):
                raise ValueError(f"transverse edge {e.id} has an in-disk end")
            # an edge lies in the disk or off it; entering the disk without a
            # puncture mark has no geometric meaning
            if in_disk[0] != in_disk[1] and not any(
                    self.vertices[e.ends[s]] is VertexKind.PUNCTURE_MARK
                    for s in (0, 1)):
                raise ValueError(f"edge {e.id} has one in-disk and one off-disk end")
        for m in self.mark_inside:
            if self.vertices.get(m) is not VertexKind.PUNCTURE_MARK:
                raise ValueError(f"mark_inside names non-mark {m}")
        # every component must run into the cusp: a compact component could
        # be split off by a sphere, which the ambient arguments forbid; a
        # transverse arc through an isolated puncture is its own component
        for comp in self._components():
            if not any(self.vertices[v] is VertexKind.PERIPHERAL_END
                       for v in comp):
                raise ValueError("graph has a compact component")
        self._side_of_end()  # raises on inconsistent side structure

    def _components(self) -> list[set]:
        remaining = set(self.vertices)
        comps = []
        while remaining:
            start = min(remaining)
            seen = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for eid, slot in self.ends_at(v):
                    w = self.edges[eid].ends[1 - slot]
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(seen)
            remaining -= seen
        return comps

    def is_connected(self) -> bool:
        return len(self._components()) <= 1

    # -- sides of the disk ---------------------------------------------------

    def _side_of_end(self) -> dict[EndRef, int]:
        """Two-color the off-disk edge-ends by side of the disk.

        Constraints: the two ends of one edge lie on the same side, ends at a
        common non-mark vertex lie on the same side, and the two transverse
        half-ends at a puncture mark lie on opposite sides.  Union-find with
        parity; polarity per component is fixed by the smallest end.
        """
        if self._sides is not None:
            return self._sides
        off = []
        for e in self.edges.values():
            for slot in (0, 1):
                end = (e.id, slot)
                if not self.is_in_disk_end(end):
                    off.append(end)
        parent: dict[EndRef, EndRef] = {x: x for x in off}
        parity: dict[EndRef, int] = {x: 0 for x in off}

        def find(x):
            p = 0
            root = x
            while parent[root] != root:
                p ^= parity[root]
                root = parent[root]
            # path compression with parity
            while parent[x] != root:
                nxt = parent[x]
                np = p ^ parity[x]
                parent[x] = root
                parity[x] = p
                x, p = nxt, np
            return root, p

        def union(x, y, rel):
            rx, px = find(x)
            ry, py = find(y)
            if rx == ry:
                if px ^ py != rel:
                    raise ValueError("inconsistent side structure at disk punctures")
                return
            parent[rx] = ry
            parity[rx] = px ^ py ^ rel

        offset = set(off)
        for e in self.edges.values():
            e0, e1 = (e.id, 0), (e.id, 1)
            if e0 in offset and e1 in offset:
                union(e0, e1, 0)
        by_vertex: dict[str, list[EndRef]] = {}
        for end in off:
            eid, slot = end
            v = self.edges[eid].ends[slot]
            by_vertex.setdefault(v, []).append(end)
        for v, ends in by_vertex.items():
            kind = self.vertices[v]
            if kind is VertexKind.PUNCTURE_MARK:
                a, b = sorted(ends)
                union(a, b, 1)
            else:
                ends = sorted(ends)
                for other in ends[1:]:
                    union(ends[0], other, 0)
        sides = {}
        anchors = {}
        for end in sorted(off):
            root, p = find(end)
            if root not in anchors:
                anchors[root] = p  # smallest end of the component gets side +
            sides[end] = p ^ anchors[root]
        self._sides = sides
        return sides

    def off_disk_side(self, end: EndRef) -> int:
        """0 for the + side, 1 for the - side; raises for in-disk ends."""
        sides = self._side_of_end()
        if end not in sides:
            raise ValueError(f"{end} is an in-disk end")
        return sides[end]

    # -- faces of the in-disk part -------------------------------------------

    def in_disk_subgraph(self):
        verts = {v for v in self.vertices if self.rotation.get(v)}
        edges = [e for e in self.edges.values()
                 if self.is_in_disk_end((e.id, 0)) and self.is_in_disk_end((e.id, 1))]
        return verts, edges

    def faces(self) -> list[tuple[tuple[str, int], ...]]:
        """Face walks of the in-disk subgraph, as orbits of directed edges.

        A dart (e, s) is edge e traversed from ends[s] to ends[1-s].  The
        successor of a dart is obtained at its head by taking the next
        edge-end after the arrival end in the rotation.  Each face is
        normalized to start at its smallest dart; the list is sorted.
        """
        if self._faces is not None:
            return self._faces
        _, edges = self.in_disk_subgraph()
        darts = [(e.id, s) for e in edges for s in (0, 1)]
        rot_index = {}
        for v, rot in self.rotation.items():
            for i, end in enumerate(rot):
                rot_index[end] = (v, i)

        def succ(dart):
            eid, s = dart
            head_end = (eid, 1 - s)
            v, i = rot_index[head_end]
            rot = self.rotation[v]
            nxt = rot[(i + 1) % len(rot)]
            return nxt

        faces = []
        todo = set(darts)
        while todo:
            start = min(todo)
            walk = []
            d = start
            while True:
                walk.append(d)
                todo.discard(d)
                d = succ(d)
                if d == start:
                    break
            k = walk.index(min(walk))
            faces.append(tuple(walk[k:] + walk[:k]))
        self._faces = sorted(faces)
        return self._faces

    def genus_zero(self) -> bool:
        verts, edges = self.in_disk_subgraph()
        if not verts:
            return True
        comp = _component_count(verts, edges)
        return len(verts) - len(edges) + len(self.faces()) == 2 * comp

    def outer_face(self):
        """The face meeting the most peripheral ends (the one along the disk
        boundary).  Requires at least one in-disk peripheral end."""
        faces = self.faces()
        best, best_count = None, -1
        for f in faces:
            count = len({self.edges[eid].ends[1 - s] for eid, s in f
                         if self.vertices[self.edges[eid].ends[1 - s]]
                         is VertexKind.PERIPHERAL_END})
            if count > best_count:
                best, best_count = f, count
        return best

    def faces_inside_cycle(self, cycle_edges: frozenset[str]) -> set[int]:
        """Indices of faces strictly enclosed by a simple in-disk cycle.

        Faces adjacent across a non-cycle edge are merged; the merged
        component not containing the outer face is the inside.
        """
        faces = self.faces()
        outer = self.outer_face()
        face_of_dart = {}
        for i, f in enumerate(faces):
            for d in f:
                face_of_dart[d] = i
        parent = list(range(len(faces)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        _, edges = self.in_disk_subgraph()
        for e in edges:
            if e.id in cycle_edges:
                continue
            a = find(face_of_dart[(e.id, 0)])
            b = find(face_of_dart[(e.id, 1)])
            parent[a] = b
        outer_root = find(faces.index(outer))
        return {i for i in range(len(faces)) if find(i) != outer_root}

    def mark_enclosed_by(self, mark: str, cycle_edges: frozenset[str]) -> bool:
        """Does the disk bounded by the given cycle contain this puncture?"""
        inside = self.faces_inside_cycle(cycle_edges)
        faces = self.faces()
        if self.rotation.get(mark):
            # a trivalent mark hangs on the in-disk subgraph; it is enclosed
            # iff it is off the cycle and all its incident faces are inside
            for eid, slot in self.rotation[mark]:
                if eid in cycle_edges:
                    return False
            touched = set()
            for i, f in enumerate(faces):
                for eid, s in f:
                    if mark in self.edges[eid].ends:
                        touched.add(i)
            return bool(touched) and touched <= inside
        recorded = self.mark_inside.get(mark)
        if recorded is None:
            return False
        if recorded == cycle_edges:
            return True
        rec_inside = self.faces_inside_cycle(recorded)
        return rec_inside <= inside and bool(rec_inside)

    # -- canonical form -------------------------------------------------------

    def canonical_form(self):
        if self._canonical is None:
            self._canonical = _canonical_encoding(self)
        return self._canonical

    def is_isomorphic(self, other: "LabeledGraph") -> bool:
        return self.canonical_form() == other.canonical_form()


def _component_count(verts, edges) -> int:
    verts = set(verts)
    adj = {v: set() for v in verts}
    for e in edges:
        a, b = e.ends
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    comps = 0
    for v in sorted(verts):
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps


# ---------------------------------------------------------------------------
# canonical encoding: lexicographically minimal over admissible vertex orders
# ---------------------------------------------------------------------------

_KIND_RANK = {VertexKind.INTERIOR: 0, VertexKind.PERIPHERAL_END: 1,
              VertexKind.PUNCTURE_MARK: 2}


def _wl_colors(g: LabeledGraph) -> dict[str, int]:
    """Iterative 1-dimensional refinement; stable colors shrink the search."""
    color = {v: (_KIND_RANK[g.vertices[v]], g.valence(v), g.incident_labels(v))
             for v in g.vertices}
    ids = {c: i for i, c in enumerate(sorted(set(color.values())))}
    color = {v: ids[c] for v, c in color.items()}
    for _ in range(len(g.vertices)):
        nxt = {}
        for v in g.vertices:
            sig = []
            for eid, slot in g.ends_at(v):
                e = g.edges[eid]
                sig.append((e.label, e.transverse, color[e.ends[1 - slot]]))
            nxt[v] = (color[v], tuple(sorted(sig)))
        ids = {c: i for i, c in enumerate(sorted(set(nxt.values())))}
        nxt = {v: ids[c] for v, c in nxt.items()}
        if len(set(nxt.values())) == len(set(color.values())):
            color = nxt
            break
        color = nxt
    return color


def _encode_with_order(g: LabeledGraph, order: dict[str, int]):
    vkinds = tuple(k for _, k in sorted(
        ((order[v], _KIND_RANK[kind]) for v, kind in g.vertices.items())))
    erows = sorted(
        (min(order[e.ends[0]], order[e.ends[1]]),
         max(order[e.ends[0]], order[e.ends[1]]),
         e.label, e.transverse)
        for e in g.edges.values())
    marks = sorted(
        (order[m],
         tuple(sorted((min(order[g.edges[eid].ends[0]], order[g.edges[eid].ends[1]]),
                       max(order[g.edges[eid].ends[0]], order[g.edges[eid].ends[1]]),
                       g.edges[eid].label) for eid in cyc)))
        for m, cyc in g.mark_inside.items())
    return (vkinds, tuple(erows), tuple(marks))


_PERM_BUDGET = 500_000


def _canonical_encoding(g: LabeledGraph):
    color = _wl_colors(g)
    classes: dict[int, list[str]] = {}
    for v, c in sorted(color.items()):
        classes.setdefault(c, []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    total = 1
    for grp in groups:
        for i in range(2, len(grp) + 1):
            total *= i
        if total > _PERM_BUDGET:
            raise ValueError("graph too symmetric for canonical-form search")
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        order = {}
        idx = 0
        for part in perm_parts:
            for v in part:
                order[v] = idx
                idx += 1
        enc = _encode_with_order(g, order)
        if best is None or enc < best:
            best = enc
    return best


# ---------------------------------------------------------------------------
# tetrahedral patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TetraPattern:
    """A Euclidean-turnover cusp plus the three interior triangle labels.

    With cusp orders (a, b, c) the interior triple is (l_bc, l_ca, l_ab):
    l_xy is the label on the triangle edge joining the finite endpoints of
    the peripheral edges of orders x and y.
    """

    cusp: TwoOrbifold
    interior: tuple[int, int, int]

    def __post_init__(self):
        if not is_euclidean_turnover(self.cusp):
            raise ValueError(f"cusp {self.cusp} is not a Euclidean turnover")
        if len(self.interior) != 3 or any(l < 2 for l in self.interior):
            raise ValueError("interior labels must be three integers >= 2")


def from_tetra(pattern: TetraPattern) -> LabeledGraph:
    """The singular graph of the orientation double cover of a one-cusped
    tetrahedral orbifold: a triangle with a peripheral leg at each corner.

    Corner v_i carries the peripheral label cusp[i]; the triangle edge
    opposite v_i joins the other two corners and carries interior[i].
    """
    a, b, c = pattern.cusp.cone_points
    l_bc, l_ca, l_ab = pattern.interior
    vertices = {
        "v1": VertexKind.INTERIOR, "v2": VertexKind.INTERIOR,
        "v3": VertexKind.INTERIOR,
        "t1": VertexKind.PERIPHERAL_END, "t2": VertexKind.PERIPHERAL_END,
        "t3": VertexKind.PERIPHERAL_END,
    }
    edges = [
        Edge("p1", ("v1", "t1"), a),
        Edge("p2", ("v2", "t2"), b),
        Edge("p3", ("v3", "t3"), c),
        Edge("e23", ("v2", "v3"), l_bc),
        Edge("e13", ("v1", "v3"), l_ca),
        Edge("e12", ("v1", "v2"), l_ab),
    ]
    rotation = {
        "v1": (("p1", 0), ("e12", 0), ("e13", 0)),
        "v2": (("p2", 0), ("e23", 0), ("e12", 1)),
        "v3": (("p3", 0), ("e13", 1), ("e23", 1)),
        "t1": (("p1", 1),), "t2": (("p2", 1),), "t3": (("p3", 1),),
    }
    return LabeledGraph(vertices, edges, rotation)


def vertex_link(g: LabeledGraph, v: str) -> TwoOrbifold:
    """The sphere orbifold of directions at a trivalent vertex: cone orders
    are the labels of the three incident edge-ends (a loop counts twice)."""
    kind = g.vertices.get(v)
    if kind is None:
        raise ValueError(f"unknown vertex {v}")
    if kind is VertexKind.PERIPHERAL_END:
        raise ValueError(f"vertex {v} is a peripheral end, not interior")
    labels = [g.edges[eid].label for eid, _ in g.ends_at(v)]
    if len(labels) != 3:
        raise ValueError(f"vertex {v} is not trivalent")
    return sphere(*labels)


def check_spherical_links(g: LabeledGraph) -> bool:
    for v, kind in sorted(g.vertices.items()):
        if kind is VertexKind.PERIPHERAL_END:
            continue
        if g.valence(v) != 3:
            continue  # valence-two marks subdivide an arc, no local group test
        if geometry_type(vertex_link(g, v)) is not GeometryClass.SPHERICAL:
            return False
    return True


def cusp_cross_section(g: LabeledGraph) -> TwoOrbifold:
    """Sphere orbifold with one cone point per peripheral end, of the order
    of the edge running into it."""
    ends = g.peripheral_ends()
    if not ends:
        raise ValueError("graph has no peripheral edges")
    orders = []
    for t in ends:
        (eid, _), = g.ends_at(t)
        orders.append(g.edges[eid].label)
    return sphere(*orders)


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Involution:
    """A nontrivial label-preserving graph involution compatible with the
    embedding data.  ``orientation_reversing`` says whether it reverses the
    rotation system of the in-disk part."""

    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str], ...]
    orientation_reversing: bool

    def vmap(self) -> dict[str, str]:
        return dict(self.vertex_map)

    def emap(self) -> dict[str, str]:
        return dict(self.edge_map)


@dataclass(frozen=True)
class AmbientInvolution:
    """An involution together with its realization data: whether the induced
    map reverses the disk's rotation system and whether it swaps the two
    sides of the disk.  A symmetry of the ambient ball reverses orientation
    iff exactly one of the two holds."""

    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str], ...]
    reverses_rotations: bool
    swaps_sides: bool

    @property
    def orientation_reversing(self) -> bool:
        return self.reverses_rotations != self.swaps_sides

    def vmap(self):
        return dict(self.vertex_map)

    def emap(self):
        return dict(self.edge_map)


def _graph_automorphisms(g: LabeledGraph):
    """All label- and kind-preserving automorphisms, as (vmap, emap) pairs.

    Backtracking over WL color classes; edge maps are resolved per incident
    group, enumerating the (rare) parallel-edge ambiguities.
    """
    color = _wl_colors(g)
    classes: dict[int, list[str]] = {}
    for v, c in sorted(color.items()):
        classes.setdefault(c, []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    results = []
    for perm_parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        vmap = {}
        ok = True
        for grp, part in zip(groups, perm_parts):
            for v, w in zip(grp, part):
                vmap[v] = w
        # edge multiset check and edge map construction
        emaps = [dict()]
        for eid in sorted(g.edges):
            e = g.edges[eid]
            ia, ib = vmap[e.ends[0]], vmap[e.ends[1]]
            candidates = [f.id for f in g.edges.values()
                          if {f.ends[0], f.ends[1]} == {ia, ib}
                          and f.label == e.label and f.transverse == e.transverse]
            if not candidates:
                ok = False
                break
            new_emaps = []
            for em in emaps:
                used = set(em.values())
                for c in candidates:
                    if c not in used:
                        em2 = dict(em)
                        em2[eid] = c
                        new_emaps.append(em2)
            emaps = new_emaps
            if not emaps:
                ok = False
                break
        if not ok:
            continue
        for em in emaps:
            if g.mark_inside:
                good = True
                for m, cyc in g.mark_inside.items():
                    target = g.mark_inside.get(vmap[m])
                    if target is None or frozenset(em[x] for x in cyc) != target:
                        good = False
                        break
                if not good:
                    continue
            results.append((vmap, em))
    # dedupe (parallel-edge enumeration can coincide on cells)
    seen = set()
    unique = []
    for vmap, em in results:
        key = (tuple(sorted(vmap.items())), tuple(sorted(em.items())))
        if key not in seen:
            seen.add(key)
            unique.append((vmap, em))
    return unique


def _end_image_candidates(g, vmap, emap, end):
    """Images of an edge-end: the matching slot(s) of the image edge."""
    eid, slot = end
    e = g.edges[eid]
    f = g.edges[emap[eid]]
    v_img = vmap[e.ends[slot]]
    return [(f.id, s) for s in (0, 1) if f.ends[s] == v_img]


def _rotation_behaviours(g: LabeledGraph, vmap, emap) -> set[bool]:
    """Feasible values of 'reverses rotations' for this automorphism.

    At every in-disk vertex of valence >= 3 the induced map on edge-ends
    must carry the cyclic order to the image cyclic order either directly
    (False) or reversed (True), consistently over all such vertices.  Loops
    make end images ambiguous; all resolutions are tried.
    """
    feasible = {False, True}
    for v, rot in sorted(g.rotation.items()):
        if len(rot) < 3:
            continue
        target = g.rotation[vmap[v]]
        local = set()
        choices = [_end_image_candidates(g, vmap, emap, end) for end in rot]
        for assignment in itertools.product(*choices):
            if len(set(assignment)) != len(assignment):
                continue
            if set(assignment) != set(target):
                continue
            idx = [target.index(a) for a in assignment]
            n = len(idx)
            if all((idx[(i + 1) % n] - idx[i]) % n == 1 for i in range(n)):
                local.add(False)
            if all((idx[(i + 1) % n] - idx[i]) % n == n - 1 for i in range(n)):
                local.add(True)
        feasible &= local
        if not feasible:
            break
    return feasible


def _side_behaviours(g: LabeledGraph, vmap, emap) -> set[bool]:
    """Feasible values of 'swaps sides'.  Without off-disk ends both ambient
    realizations exist (compose with the reflection through the disk)."""
    sides = g._side_of_end()
    if not sides:
        return {False, True}
    feasible = {False, True}
    for end in sorted(sides):
        images = [im for im in _end_image_candidates(g, vmap, emap, end)
                  if im in sides]
        if not images:
            return set()
        feasible &= {bool(sides[im] != sides[end]) for im in images}
        if not feasible:
            break
    return feasible


def _is_involution(g, vmap, emap) -> bool:
    return all(vmap[vmap[v]] == v for v in g.vertices) and \
           all(emap[emap[e]] == e for e in g.edges)


def _is_identity(g, vmap, emap) -> bool:
    return all(vmap[v] == v for v in g.vertices) and \
           all(emap[e] == e for e in g.edges)


def symmetries(g: LabeledGraph) -> list[Involution]:
    """All nontrivial graph involutions compatible with the embedding,
    flagged by whether they reverse the in-disk rotation system."""
    out = []
    for vmap, emap in _graph_automorphisms(g):
        if _is_identity(g, vmap, emap) or not _is_involution(g, vmap, emap):
            continue
        rhos = _rotation_behaviours(g, vmap, emap)
        if not rhos:
            continue
        if not _side_behaviours(g, vmap, emap):
            continue
        reversing = True in rhos and False not in rhos
        out.append(Involution(tuple(sorted(vmap.items())),
                              tuple(sorted(emap.items())), reversing))
    return sorted(out, key=lambda i: (i.vertex_map, i.edge_map))


def ambient_involutions(g: LabeledGraph) -> list[AmbientInvolution]:
    """Nontrivial ambient involutions: graph involutions (identity allowed)
    with each feasible (reverses rotations, swaps sides) realization, minus
    the genuine identity."""
    out = []
    for vmap, emap in _graph_automorphisms(g):
        if not _is_involution(g, vmap, emap):
            continue
        rhos = _rotation_behaviours(g, vmap, emap)
        sigmas = _side_behaviours(g, vmap, emap)
        for rho in sorted(rhos):
            for sig in sorted(sigmas):
                if _is_identity(g, vmap, emap) and not rho and not sig:
                    continue
                out.append(AmbientInvolution(
                    tuple(sorted(vmap.items())), tuple(sorted(emap.items())),
                    rho, sig))
    return sorted(out, key=lambda i: (i.vertex_map, i.edge_map,
                                      i.reverses_rotations, i.swaps_sides))


def admits_reflection(g: LabeledGraph) -> bool:
    return any(a.orientation_reversing for a in ambient_involutions(g))


def has_orientation_preserving_symmetry(g: LabeledGraph) -> bool:
    return any(not a.orientation_reversing for a in ambient_involutions(g))


# ---------------------------------------------------------------------------
# quotient by an involution
# ---------------------------------------------------------------------------

def _lcm2(n: int) -> int:
    return n if n % 2 == 0 else 2 * n


def quotient_by_involution(g: LabeledGraph, tau: Involution) -> tuple[LabeledGraph, dict]:
    """Combinatorial quotient of the graph by an involution realized as a
    rotation of angle pi about an axis meeting the disk.

    Free orbits of cells descend to single cells.  The rotation axis meets
    the graph in its fixed vertices and in the midpoints of inverted edges;
    along the axis the quotient acquires new order-2 singular arcs, an
    invariant edge lying on the axis has its order doubled (lcm with 2), and
    an inverted edge folds to a half-edge ending at a new trivalent vertex.
    Supports at most two axis features, which covers the triangle patterns.

    Returns (quotient graph, provenance) where provenance maps each quotient
    cell to the tuple of source cells (empty for new axis cells).
    """
    if tau not in symmetries(g):
        raise ValueError("map is not a nontrivial involution of this graph")
    vmap, emap = tau.vmap(), tau.emap()

    fixed_vertices = sorted(v for v in g.vertices if vmap[v] == v)
    inverted_edges = []
    fixed_edges = []
    for eid in sorted(g.edges):
        if emap[eid] != eid:
            continue
        e = g.edges[eid]
        a, b = e.ends
        if a == b:
            raise ValueError("quotients of graphs with invariant loops "
                             "are not supported")
        if vmap[a] == b:
            inverted_edges.append(eid)
        else:
            fixed_edges.append(eid)

    features = [("vertex", v) for v in fixed_vertices
                if g.vertices[v] is not VertexKind.PERIPHERAL_END] + \
               [("mid", e) for e in inverted_edges]
    if len(features) == 0:
        raise ValueError("involution acts freely; quotient has no axis data")
    if len(features) > 2:
        raise ValueError("more than two axis features; axis order is ambiguous")

    verts: dict[str, VertexKind] = {}
    edges: list[Edge] = []
    provenance: dict[str, tuple[str, ...]] = {}

    def orbit_vertex(v):
        w = vmap[v]
        return min(v, w)

    # vertices: one per orbit
    for v in sorted(g.vertices):
        o = orbit_vertex(v)
        if o not in verts:
            verts[o] = g.vertices[o]
            provenance["v:" + o] = tuple("v:" + x for x in sorted({o, vmap[o]}))

    # edges in free orbits
    done = set()
    for eid in sorted(g.edges):
        if eid in done or emap[eid] == eid:
            continue
        other = emap[eid]
        done.add(eid)
        done.add(other)
        e = g.edges[eid]
        edges.append(Edge(eid, (orbit_vertex(e.ends[0]), orbit_vertex(e.ends[1])),
                          e.label, e.transverse))
        provenance["e:" + eid] = ("e:" + eid, "e:" + other)

    # invariant edges lie on the axis: order merges with the rotation
    for eid in fixed_edges:
        e = g.edges[eid]
        edges.append(Edge(eid, e.ends, _lcm2(e.label), e.transverse))
        provenance["e:" + eid] = ("e:" + eid,)

    # inverted edges fold to a half-edge at a new midpoint vertex
    midpoints = {}
    for eid in inverted_edges:
        e = g.edges[eid]
        m = f"mid_{eid}"
        midpoints[eid] = m
        verts[m] = VertexKind.INTERIOR
        provenance["v:" + m] = ("e:" + eid,)
        half = f"{eid}_half"
        edges.append(Edge(half, (orbit_vertex(e.ends[0]), m), e.label))
        provenance["e:" + half] = ("e:" + eid,)

    def free_axis_slots(feature):
        kind, name = feature
        if kind == "mid":
            return 2
        # a fixed trivalent vertex has one invariant edge occupying one
        # axis direction (its other two edges are swapped off the axis)
        return 2 - len([eid for eid in fixed_edges if name in g.edges[eid].ends])

    def feature_vertex(feature):
        kind, name = feature
        return midpoints[name] if kind == "mid" else name

    slots = {f: free_axis_slots(f) for f in features}
    new_idx = 0
    if len(features) == 2:
        f1, f2 = features
        already = [eid for eid in fixed_edges
                   if {feature_vertex(f1), feature_vertex(f2)} ==
                   set(g.edges[eid].ends)]
        if not already:
            edges.append(Edge("axis_span", (feature_vertex(f1), feature_vertex(f2)), 2))
            provenance["e:axis_span"] = ()
            slots[f1] -= 1
            slots[f2] -= 1
    for f in features:
        for _ in range(slots[f]):
            t = f"axis_end{new_idx}"
            e = f"axis_ray{new_idx}"
            new_idx += 1
            verts[t] = VertexKind.PERIPHERAL_END
            edges.append(Edge(e, (feature_vertex(f), t), 2))
            provenance["v:" + t] = ()
            provenance["e:" + e] = ()

    rotation = embed_in_disk(verts, edges)
    if rotation is None:
        raise ValueError("quotient graph is not disk-embeddable")
    q = LabeledGraph(verts, edges, rotation)
    return q, provenance


# ---------------------------------------------------------------------------
# disk embeddings
# ---------------------------------------------------------------------------

def embeddings_in_disk(vertices, edges):
    """Yield rotation systems embedding the graph in a disk with all
    peripheral ends on the boundary (genus-zero embeddings having a face
    that meets every peripheral end).

    Only the in-disk structure is handled; callers strip off-disk edges
    first.  Cyclic orders are tried per trivalent vertex (two per vertex up
    to rotation), which is exact and cheap at these sizes.
    """
    vdict = dict(vertices)
    by_vertex: dict[str, list[EndRef]] = {v: [] for v in vdict}
    for e in edges:
        for slot in (0, 1):
            by_vertex[e.ends[slot]].append((e.id, slot))
    choices = []
    keys = sorted(vdict)
    for v in keys:
        ends = sorted(by_vertex[v])
        if len(ends) <= 2:
            choices.append([tuple(ends)])
        else:
            first = ends[0]
            rest = ends[1:]
            choices.append([(first,) + p for p in itertools.permutations(rest)])
    for combo in itertools.product(*choices):
        rotation = dict(zip(keys, combo))
        probe = _FaceProbe(vdict, edges, rotation)
        if not probe.genus_zero():
            continue
        if probe.has_face_with_all_peripheral():
            yield rotation


def embed_in_disk(vertices, edges) -> Optional[dict]:
    """First disk embedding found, or None."""
    for rotation in embeddings_in_disk(vertices, edges):
        return rotation
    return None


class _FaceProbe:
    """Face traversal on raw (vertices, edges, rotation) without building a
    full LabeledGraph (used while searching for embeddings)."""

    def __init__(self, vertices, edges, rotation):
        self.vertices = vertices
        self.edges = {e.id: e for e in edges}
        self.rotation = rotation
        self._faces = None

    def faces(self):
        if self._faces is not None:
            return self._faces
        rot_index = {}
        for v, rot in self.rotation.items():
            for i, end in enumerate(rot):
                rot_index[end] = (v, i)
        darts = [(eid, s) for eid in self.edges for s in (0, 1)]

        def succ(dart):
            eid, s = dart
            v, i = rot_index[(eid, 1 - s)]
            rot = self.rotation[v]
            return rot[(i + 1) % len(rot)]

        faces = []
        todo = set(darts)
        while todo:
            start = min(todo)
            walk = []
            d = start
            while True:
                walk.append(d)
                todo.discard(d)
                d = succ(d)
                if d == start:
                    break
            faces.append(tuple(walk))
        self._faces = faces
        return faces

    def genus_zero(self):
        comp = _component_count(list(self.vertices), list(self.edges.values()))
        if comp != 1:
            return False
        return len(self.vertices) - len(self.edges) + len(self.faces()) == 2

    def has_face_with_all_peripheral(self):
        per = {v for v, k in self.vertices.items()
               if k is VertexKind.PERIPHERAL_END}
        if not per:
            return True
        for f in self.faces():
            seen = {self.edges[eid].ends[1 - s] for eid, s in f}
            if per <= seen:
                return True
        return False


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_KIND_TOKEN = {VertexKind.INTERIOR: "interior",
               VertexKind.PERIPHERAL_END: "peripheral",
               VertexKind.PUNCTURE_MARK: "puncture"}
_TOKEN_KIND = {tok: k for k, tok in _KIND_TOKEN.items()}


def dump_graph(g: LabeledGraph) -> str:
    """One record per line: ``v <id> <kind>``, ``e <id> <v1> <v2> <label>
    [transverse]``, ``rot <v> <edge.slot> ...``, and for a floating puncture
    ``mark <id> inside <edge> ...``.  Deterministic; round-trips exactly."""
    lines = []
    for v in sorted(g.vertices):
        lines.append(f"v {v} {_KIND_TOKEN[g.vertices[v]]}")
    for eid in sorted(g.edges):
        e = g.edges[eid]
        base = f"e {eid} {e.ends[0]} {e.ends[1]} {e.label}"
        lines.append(base + (" transverse" if e.transverse else ""))
    for v in sorted(g.rotation):
        if not g.rotation[v]:
            continue
        ends = " ".join(f"{eid}.{slot}" for eid, slot in g.rotation[v])
        lines.append(f"rot {v} {ends}")
    for m in sorted(g.mark_inside):
        cyc = " ".join(sorted(g.mark_inside[m]))
        lines.append(f"mark {m} inside {cyc}")
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> LabeledGraph:
    vertices = {}
    edges = []
    rotation = {}
    mark_inside = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) != 3 or parts[2] not in _TOKEN_KIND:
                raise ValueError(f"line {lineno}: bad vertex record")
            vertices[parts[1]] = _TOKEN_KIND[parts[2]]
        elif tag == "e":
            if len(parts) not in (5, 6):
                raise ValueError(f"line {lineno}: bad edge record")
            transverse = len(parts) == 6
            if transverse and parts[5] != "transverse":
                raise ValueError(f"line {lineno}: unknown edge flag {parts[5]}")
            edges.append(Edge(parts[1], (parts[2], parts[3]), int(parts[4]),
                              transverse))
        elif tag == "rot":
            ends = []
            for tok in parts[2:]:
                eid, _, slot = tok.rpartition(".")
                ends.append((eid, int(slot)))
            rotation[parts[1]] = tuple(ends)
        elif tag == "mark":
            if len(parts) < 4 or parts[2] != "inside":
                raise ValueError(f"line {lineno}: bad mark record")
            mark_inside[parts[1]] = frozenset(parts[3:])
        else:
            raise ValueError(f"line {lineno}: unknown record type {tag!r}")
    return LabeledGraph(vertices, edges, rotation, mark_inside)
