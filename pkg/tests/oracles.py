"""Independent oracles for the test suite.

Everything here is deliberately written from scratch against the defining
formulas, not against the package internals: the Lobachevsky function by
numerical quadrature of its integral, tetrahedron volumes by integrating the
volume differential along an angle deformation path (with its own Gram
matrix and edge-length code), and disk shapes by unpruned stub-matching
enumeration with networkx isomorphism tests.
"""

import itertools
import math

import networkx as nx
import numpy as np
from scipy.integrate import quad


# ---------------------------------------------------------------------------
# Lobachevsky function by quadrature
# ---------------------------------------------------------------------------

def lobachevsky_quadrature(theta: float) -> float:
    # integrable log singularities at multiples of pi; split there
    k = math.floor(theta / math.pi)
    val = 0.0
    pieces = [(i * math.pi, (i + 1) * math.pi) for i in range(0, k)]
    pieces.append((k * math.pi, theta))
    total = 0.0
    for a, b in pieces:
        if b - a < 1e-15:
            continue
        v, _ = quad(lambda t: -math.log(abs(2.0 * math.sin(t))), a, b,
                    limit=300, epsabs=1e-13, epsrel=1e-13,
                    points=None)
        total += v
    return total


# ---------------------------------------------------------------------------
# tetrahedron volume by integrating the volume differential
# ---------------------------------------------------------------------------

def _gram(cusp, angles):
    """Gram matrix for the one-ideal-vertex tetrahedron: vertex 0 ideal,
    finite vertex i carries the cusp order cusp[i-1] on its ideal edge;
    angles[(i, j)] is the dihedral angle on the finite edge i < j."""
    g = np.eye(4)
    per = {(2, 3): math.pi / cusp[0], (1, 3): math.pi / cusp[1],
           (1, 2): math.pi / cusp[2]}
    for (a, b), t in per.items():
        g[a, b] = g[b, a] = -math.cos(t)
    for (i, j), t in angles.items():
        k = ({1, 2, 3} - {i, j}).pop()
        g[0, k] = g[k, 0] = -math.cos(t)
    return g


def _edge_length(g, i, j):
    gi = np.linalg.inv(g)
    dii, djj = gi[i, i], gi[j, j]
    if dii >= -1e-13 or djj >= -1e-13:
        raise ValueError("endpoint is not a finite vertex")
    c = abs(gi[i, j]) / math.sqrt(dii * djj)
    return math.acosh(max(1.0, c))


def schlafli_volume(cusp, interior) -> float:
    """Volume of the tetrahedron with the given cusp orders and interior
    labels (l_bc, l_ca, l_ab), by the volume differential
    dV = -(1/2) sum_e len(e) d(angle_e).

    The interior angles are brought from the all-right configuration (a
    degenerate prism of volume zero) to their targets one edge at a time,
    with the cusp angles frozen throughout.
    """
    l_bc, l_ca, l_ab = interior
    targets = {(2, 3): math.pi / l_bc, (1, 3): math.pi / l_ca,
               (1, 2): math.pi / l_ab}
    angles = {e: math.pi / 2 for e in targets}
    total = 0.0
    for e in sorted(targets):
        tgt = targets[e]
        if abs(tgt - angles[e]) < 1e-15:
            continue
        frozen = dict(angles)

        def integrand(t, e=e, frozen=frozen):
            a = dict(frozen)
            a[e] = t
            return _edge_length(_gram(cusp, a), *e)

        val, _ = quad(integrand, tgt, angles[e],
                      epsabs=1e-13, epsrel=1e-13, limit=500)
        total += 0.5 * val
        angles[e] = tgt
    return total


# ---------------------------------------------------------------------------
# brute-force disk shapes
# ---------------------------------------------------------------------------

def _sorted_edge_multigraphs(degrees):
    """All multigraphs (loops allowed) on the given degree map, enumerated
    as lexicographically sorted edge multisets with degree bookkeeping and a
    no-stranded-component prune (a saturated component that is not yet the
    whole vertex set can never reconnect)."""
    names = sorted(degrees)
    idx = {v: i for i, v in enumerate(names)}
    results = []

    def components_ok(remaining, edges):
        parent = list(range(len(names)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in edges:
            ra, rb = find(idx[a]), find(idx[b])
            parent[ra] = rb
        comps = {}
        for v in names:
            comps.setdefault(find(idx[v]), []).append(v)
        if len(comps) == 1:
            return True
        for comp in comps.values():
            if all(remaining[v] == 0 for v in comp):
                return False
        return True

    def extend(remaining, edges, min_edge):
        live = [v for v in names if remaining[v] > 0]
        if not live:
            if components_ok(remaining, edges):
                results.append(tuple(edges))
            return
        v = live[0]
        for w in names:
            cand = (min(v, w), max(v, w))
            if cand < min_edge:
                continue
            if w == v:
                if remaining[v] < 2:
                    continue
            elif remaining[w] <= 0:
                continue
            r2 = dict(remaining)
            r2[v] -= 1
            r2[w] -= 1
            # prune branches where a saturated component has split off
            if not components_ok(r2, edges + [cand]):
                continue
            extend(r2, edges + [cand], cand)

    extend(dict(degrees), [], ("", ""))
    return results


def _faces_of_rotation(edges, rotation):
    darts = []
    for k, (a, b) in enumerate(edges):
        darts.append((k, 0))
        darts.append((k, 1))
    pos = {}
    for v, rot in rotation.items():
        for i, d in enumerate(rot):
            pos[d] = (v, i)

    def head(d):
        k, s = d
        return edges[k][1 - s]

    def succ(d):
        k, s = d
        v, i = pos[(k, 1 - s)]
        rot = rotation[v]
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
        faces.append(walk)
    return faces


def _disk_embeddings(vertices, edges):
    """Yield rotation systems with Euler characteristic 2 and one face that
    meets every degree-one (boundary) vertex."""
    incid = {v: [] for v in vertices}
    for k, (a, b) in enumerate(edges):
        incid[a].append((k, 0))
        incid[b].append((k, 1))
    keys = sorted(vertices)
    options = []
    for v in keys:
        ends = sorted(incid[v])
        if len(ends) <= 2:
            options.append([tuple(ends)])
        else:
            options.append([(ends[0],) + p
                            for p in itertools.permutations(ends[1:])])
    boundary = {v for v in vertices if len(incid[v]) == 1}
    for combo in itertools.product(*options):
        rotation = dict(zip(keys, combo))
        faces = _faces_of_rotation(edges, rotation)
        if len(vertices) - len(edges) + len(faces) != 2:
            continue
        for f in faces:
            heads = {edges[k][1 - s] for k, s in f}
            if boundary <= heads:
                yield rotation, faces, f
                break


def _outer_arcs_are_three_edges(edges, vertices, rotation, outer, boundary):
    walk = [(k, s) for k, s in outer]
    heads = [edges[k][1 - s] for k, s in walk]
    marks = [i for i, h in enumerate(heads) if h in boundary]
    if len(marks) != len(boundary):
        return False
    n = len(walk)
    for a, b in zip(marks, marks[1:] + [marks[0] + n]):
        stretch = [walk[i % n] for i in range(a + 1, b + 1)]
        eids = [k for k, _ in stretch]
        if len(eids) != 3 or len(set(eids)) != 3:
            return False
        mid = [heads[(a + 1) % n], heads[(a + 2) % n]]
        if len(set(mid)) != 2 or any(m in boundary for m in mid):
            return False
    return True


def _generic_barrier_ok(G, boundary):
    """No vertex-disjoint pair (boundary-to-boundary path, cycle)."""
    cycles = []
    for cyc in nx.simple_cycles(nx.MultiGraph(G)):
        cycles.append(set(cyc))
    paths = []
    bl = sorted(boundary)
    for i in range(len(bl)):
        for j in range(i + 1, len(bl)):
            for p in nx.all_simple_paths(G, bl[i], bl[j]):
                paths.append(set(p))
    for c in cycles:
        for p in paths:
            if not (c & p):
                return False
    return True


def brute_force_disk_shapes(boundary_count, max_interior):
    """All shapes surviving the filter chain, as a list of networkx
    multigraphs, one per isomorphism class."""
    survivors = []
    for k in range(1, max_interior + 1):
        if (boundary_count + 3 * k) % 2:
            continue
        degrees = {f"t{i}": 1 for i in range(boundary_count)}
        degrees.update({f"v{i}": 3 for i in range(k)})
        boundary = {f"t{i}" for i in range(boundary_count)}
        for edge_seq in _sorted_edge_multigraphs(degrees):
            G = nx.MultiGraph()
            G.add_nodes_from(degrees)
            for a, b in edge_seq:
                G.add_edge(a, b)
            if not nx.is_connected(G):
                continue
            found = False
            for rotation, faces, outer in _disk_embeddings(
                    set(degrees), list(edge_seq)):
                if _outer_arcs_are_three_edges(list(edge_seq), set(degrees),
                                               rotation, outer, boundary):
                    found = True
                    break
            if not found:
                continue
            if not _generic_barrier_ok(G, boundary):
                continue
            if any(nx.is_isomorphic(
                    G, H,
                    node_match=lambda a, b: a.get("kind") == b.get("kind"))
                   for H in survivors):
                continue
            for t in boundary:
                G.nodes[t]["kind"] = "boundary"
            for v in set(degrees) - boundary:
                G.nodes[v]["kind"] = "interior"
            if any(nx.is_isomorphic(
                    G, H, node_match=lambda a, b: a.get("kind") == b.get("kind"))
                   for H in survivors):
                continue
            survivors.append(G)
    return survivors


# ---------------------------------------------------------------------------
# frozen literature constant
# ---------------------------------------------------------------------------

FIGURE_EIGHT_COMPLEMENT_VOLUME = 2.029883212819307  # external fixture
