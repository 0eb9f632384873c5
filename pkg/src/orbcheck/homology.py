"""First homology of the orientable orbifolds encoded by labeled graphs.

The orbifold's underlying space is a ball and the singular graph runs out to
a single ideal point, so first homology has a meridian presentation: one
generator per singular edge, one signed-sum relation per trivalent vertex
(the meridians around a vertex sphere sum to zero once edges are oriented),
and one torsion relation label(e) * meridian(e) = 0 per edge.  Peripheral
ends are truncation marks, not vertices, and the relation at the ideal point
is a consequence of the finite ones, so neither contributes a row.  The two
halves of a transverse arc at a puncture mark are one edge of the ambient
orbifold: they share a meridian generator, oriented continuously through the
mark, and a mark that is not a genuine trivalent vertex contributes no
relation.

The presentation is reduced by integer Smith normal form with exact
arithmetic.  Any consistent orientation convention gives the same invariant
factors (flipping a meridian is a unimodular column operation), which the
property suite checks directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .siggraph import LabeledGraph, VertexKind
from .orb2d import sphere


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or \
                any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix dimensions inconsistent with entries")

    @staticmethod
    def from_rows(rows) -> "IntegerMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        return IntegerMatrix(len(rows), ncols, rows)

    @staticmethod
    def identity(n: int) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __mul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [[sum(self.entries[i][k] * other.entries[k][j]
                    for k in range(self.cols))
                for j in range(other.cols)] for i in range(self.rows)]
        return IntegerMatrix.from_rows(out)

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


@dataclass(frozen=True)
class InvariantFactors:
    """Elementary divisors of an abelian group: each torsion entry is >= 2
    and divides the next; free_rank counts Z summands."""

    torsion: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")

    def is_quotient_of_z2(self) -> bool:
        return self.free_rank == 0 and self.torsion in ((), (2,))

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def smith_normal_form(m: IntegerMatrix):
    """Gcd-pivoting over exact integers, clearing each entry with a single
    unimodular two-row (or two-column) transform built from the extended
    Euclidean algorithm, which keeps coefficient growth tame.

    Returns (S, U, V) with U * m * V = S, U and V unimodular, S diagonal
    with each diagonal entry dividing the next.
    """
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for r in a:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def clear_row_entry(t, i):
        # make a[i][t] zero; a plain subtraction when the pivot divides it
        # (leaving row t untouched), otherwise the unimodular gcd transform,
        # which strictly shrinks the pivot and so happens finitely often
        p, q = a[t][t], a[i][t]
        if q % p == 0:
            k = q // p
            a[i] = [r2 - k * r1 for r1, r2 in zip(a[t], a[i])]
            u[i] = [r2 - k * r1 for r1, r2 in zip(u[t], u[i])]
            return
        g, x, y = _xgcd(p, q)
        pp, qq = p // g, q // g
        at, ai = a[t], a[i]
        a[t] = [x * r1 + y * r2 for r1, r2 in zip(at, ai)]
        a[i] = [-qq * r1 + pp * r2 for r1, r2 in zip(at, ai)]
        ut, ui = u[t], u[i]
        u[t] = [x * r1 + y * r2 for r1, r2 in zip(ut, ui)]
        u[i] = [-qq * r1 + pp * r2 for r1, r2 in zip(ut, ui)]

    def clear_col_entry(t, j):
        p, q = a[t][t], a[t][j]
        if q % p == 0:
            k = q // p
            for r in a:
                r[j] -= k * r[t]
            for r in v:
                r[j] -= k * r[t]
            return
        g, x, y = _xgcd(p, q)
        pp, qq = p // g, q // g
        for r in a:
            ct, cj = r[t], r[j]
            r[t] = x * ct + y * cj
            r[j] = -qq * ct + pp * cj
        for r in v:
            ct, cj = r[t], r[j]
            r[t] = x * ct + y * cj
            r[j] = -qq * ct + pp * cj

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (pivot is None or
                                abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    clear_row_entry(t, i)
            for j in range(t + 1, nc):
                if a[t][j]:
                    clear_col_entry(t, j)
            if all(a[i][t] == 0 for i in range(t + 1, nr)) and \
               all(a[t][j] == 0 for j in range(t + 1, nc)):
                break
        # the pivot must divide every deeper entry; fold an offending row in
        stray = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            at, ast = a[t], a[stray]
            a[t] = [r1 + r2 for r1, r2 in zip(at, ast)]
            ut, ust = u[t], u[stray]
            u[t] = [r1 + r2 for r1, r2 in zip(ut, ust)]
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return (IntegerMatrix.from_rows(a),
            IntegerMatrix.from_rows(u),
            IntegerMatrix.from_rows(v))


def invariant_factors_of(m: IntegerMatrix) -> InvariantFactors:
    """Cokernel of the relation matrix acting on Z^cols by its rows."""
    s, _, _ = smith_normal_form(m)
    diag = [d for d in s.diagonal() if d != 0]
    torsion = tuple(d for d in diag if d != 1)
    return InvariantFactors(torsion, m.cols - len(diag))


# ---------------------------------------------------------------------------
# the meridian presentation
# ---------------------------------------------------------------------------

def _meridian_classes(g: LabeledGraph):
    """Meridian generators in canonical column order.

    Each edge is a generator, except that the two transverse halves at a
    puncture mark are identified into one generator; the second half (by id)
    is carried with reversed orientation so the arc is oriented continuously
    through the mark.
    """
    merged: dict[str, str] = {}
    flip: dict[str, bool] = {e: False for e in g.edges}
    for m in g.puncture_marks():
        halves = sorted(eid for eid, _ in g.ends_at(m)
                        if (eid, 0) not in g.rotation.get(m, ())
                        and (eid, 1) not in g.rotation.get(m, ()))
        if len(halves) != 2:
            continue
        h1, h2 = halves
        if h1 == h2:
            continue  # a single transverse edge passing through the mark
        if g.edges[h1].label != g.edges[h2].label:
            raise ValueError(f"transverse halves at {m} carry different labels")
        merged[h2] = h1
        # continuity: if both halves point the same way relative to the mark
        # (both heads or both tails there), the second one is flipped
        s1 = 0 if g.edges[h1].ends[0] == m else 1
        s2 = 0 if g.edges[h2].ends[0] == m else 1
        flip[h2] = (s1 == s2)

    reps = sorted(e for e in g.edges if e not in merged)
    col = {}
    for e in g.edges:
        col[e] = reps.index(merged.get(e, e))
    return reps, col, flip


def relation_matrix(g: LabeledGraph) -> IntegerMatrix:
    """Vertex rows (trivalent vertices, puncture marks included) followed by
    one torsion row per meridian generator; one column per generator."""
    reps, col, flip = _meridian_classes(g)
    rows = []
    for v in sorted(g.vertices):
        kind = g.vertices[v]
        if kind is VertexKind.PERIPHERAL_END:
            continue
        if g.valence(v) != 3:
            continue
        row = [0] * len(reps)
        for eid, slot in g.ends_at(v):
            sign = 1 if slot == 0 else -1  # tail +, head -
            if flip[eid]:
                sign = -sign
            row[col[eid]] += sign
        rows.append(row)
    for i, rep in enumerate(reps):
        row = [0] * len(reps)
        row[i] = g.edges[rep].label
        rows.append(row)
    return IntegerMatrix.from_rows(rows)


def h1(g: LabeledGraph) -> InvariantFactors:
    return invariant_factors_of(relation_matrix(g))


def passes_restriction_two(g: LabeledGraph) -> bool:
    """For a graph with cusp S2(2,3,6): is H1 trivial or Z/2?

    The homology restriction is calibrated only for that cusp; other cusp
    types get their H1 reported informationally instead.
    """
    from .siggraph import cusp_cross_section
    if cusp_cross_section(g) != sphere(2, 3, 6):
        raise ValueError("homology restriction applies to S2(2,3,6)-cusped graphs")
    return h1(g).is_quotient_of_z2()


_RIGID_CUSP_H1_BOUND = {(2, 3, 6): 2, (3, 3, 3): 3, (2, 4, 4): 4}


def rigid_cusp_h1_bound(g: LabeledGraph) -> int:
    """The cyclic bound on first homology for an orientable orbifold covered
    by a knot complement: H1 must be a quotient of Z/2, Z/3 or Z/4 when the
    rigid cusp section is S2(2,3,6), S2(3,3,3) or S2(2,4,4) respectively."""
    from .siggraph import cusp_cross_section
    cusp = cusp_cross_section(g)
    key = tuple(cusp.cone_points)
    if key not in _RIGID_CUSP_H1_BOUND:
        raise ValueError(f"cusp {cusp} is not a Euclidean turnover")
    return _RIGID_CUSP_H1_BOUND[key]


def within_rigid_cusp_h1_bound(g: LabeledGraph) -> bool:
    bound = rigid_cusp_h1_bound(g)
    inv = h1(g)
    if inv.free_rank:
        return False
    if not inv.torsion:
        return True
    return len(inv.torsion) == 1 and bound % inv.torsion[0] == 0
