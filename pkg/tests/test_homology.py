import itertools
import random
from fractions import Fraction

import pytest

from orbcheck.orb2d import sphere
from orbcheck.siggraph import Edge, LabeledGraph, TetraPattern, VertexKind, from_tetra
from orbcheck.homology import (IntegerMatrix, InvariantFactors, h1,
                               invariant_factors_of, passes_restriction_two,
                               relation_matrix, rigid_cusp_h1_bound,
                               smith_normal_form, within_rigid_cusp_h1_bound)


def tetra(cusp, interior):
    return from_tetra(TetraPattern(sphere(*cusp), interior))


def det_exact(m: IntegerMatrix):
    # fraction-free Gaussian elimination, exact over the rationals
    n = m.rows
    a = [[Fraction(x) for x in row] for row in m.entries]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    assert det.denominator == 1
    return int(det)


# -- relation matrix shapes --------------------------------------------------

def test_relation_matrix_tetra_shape():
    m = relation_matrix(tetra((2, 3, 6), (2, 2, 2)))
    assert (m.rows, m.cols) == (9, 6)   # 3 vertex rows + 6 torsion rows


def test_relation_matrix_single_edge():
    g = LabeledGraph(
        {"a": VertexKind.PERIPHERAL_END, "b": VertexKind.PERIPHERAL_END},
        [Edge("e", ("a", "b"), 5)])
    m = relation_matrix(g)
    assert m.entries == ((5,),)
    assert invariant_factors_of(m) == InvariantFactors((5,), 0)


def test_relation_matrix_transverse_halves_identified():
    # an arc subdivided by a pass-through puncture is one meridian
    g = LabeledGraph(
        {"m": VertexKind.PUNCTURE_MARK,
         "tL": VertexKind.PERIPHERAL_END, "tR": VertexKind.PERIPHERAL_END},
        [Edge("hL", ("m", "tL"), 6, transverse=True),
         Edge("hR", ("m", "tR"), 6, transverse=True)])
    m = relation_matrix(g)
    assert m.cols == 1
    assert invariant_factors_of(m).torsion == (6,)


# -- Smith normal form -------------------------------------------------------

def test_snf_examples():
    ident = IntegerMatrix.identity(2)
    s, u, v = smith_normal_form(ident)
    assert s.entries == ident.entries

    d23 = IntegerMatrix.from_rows([[2, 0], [0, 3]])
    s, u, v = smith_normal_form(d23)
    assert s.diagonal() == [1, 6]

    zero = IntegerMatrix.from_rows([[0, 0], [0, 0]])
    s, u, v = smith_normal_form(zero)
    assert s.entries == zero.entries


def test_snf_property_suite():
    rng = random.Random(20260809)
    for trial in range(1000):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 8)
        m = IntegerMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
        s, u, v = smith_normal_form(m)
        assert (u * m * v).entries == s.entries, trial
        assert abs(det_exact(u)) == 1, trial
        assert abs(det_exact(v)) == 1, trial
        diag = s.diagonal()
        for i in range(s.rows):
            for j in range(s.cols):
                if i != j:
                    assert s.entries[i][j] == 0, trial
        nz = [d for d in diag if d != 0]
        assert all(d > 0 for d in nz)
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0, (trial, diag)
        # zeros only after the last nonzero
        if 0 in diag:
            assert all(d == 0 for d in diag[diag.index(0):])


# -- orbifold homology -------------------------------------------------------

def test_h1_calibration_values():
    assert h1(tetra((2, 3, 6), (2, 2, 2))) == InvariantFactors((2, 2), 0)
    assert h1(tetra((2, 3, 6), (2, 2, 4))) == InvariantFactors((2, 2), 0)
    # frozen from an independent hand reduction of the 9x6 system
    assert h1(tetra((2, 3, 6), (2, 2, 3))) == InvariantFactors((2,), 0)
    assert h1(tetra((2, 3, 6), (2, 2, 5))) == InvariantFactors((2,), 0)


def test_restriction_two():
    assert passes_restriction_two(tetra((2, 3, 6), (2, 2, 3)))
    assert passes_restriction_two(tetra((2, 3, 6), (2, 2, 5)))
    assert not passes_restriction_two(tetra((2, 3, 6), (2, 2, 2)))
    assert not passes_restriction_two(tetra((2, 3, 6), (2, 2, 4)))
    with pytest.raises(ValueError):
        passes_restriction_two(tetra((3, 3, 3), (2, 2, 3)))


def test_restriction_two_over_admissible_labels():
    # over the four sphericity-admissible third labels, exactly 3 and 5 pass
    passing = [k for k in (2, 3, 4, 5)
               if passes_restriction_two(tetra((2, 3, 6), (2, 2, k)))]
    assert passing == [3, 5]


def test_rigid_cusp_h1_bound():
    assert rigid_cusp_h1_bound(tetra((2, 3, 6), (2, 2, 3))) == 2
    assert rigid_cusp_h1_bound(tetra((3, 3, 3), (2, 2, 3))) == 3
    assert rigid_cusp_h1_bound(tetra((2, 4, 4), (2, 2, 3))) == 4
    assert within_rigid_cusp_h1_bound(tetra((2, 3, 6), (2, 2, 3)))
    assert not within_rigid_cusp_h1_bound(tetra((2, 3, 6), (2, 2, 2)))


def test_h1_invariant_under_relabeling():
    g = tetra((2, 3, 6), (2, 2, 3))
    renamed = LabeledGraph(
        {"z" + v: k for v, k in g.vertices.items()},
        [Edge("w" + e.id, ("z" + e.ends[0], "z" + e.ends[1]), e.label,
              e.transverse) for e in g.edges.values()],
        {("z" + v): tuple(("w" + eid, s) for eid, s in rot)
         for v, rot in g.rotation.items()})
    assert h1(renamed) == h1(g)


def test_h1_sign_convention_invariance():
    # flipping any meridian orientation = negating its column; invariant
    # factors must not change, over all sign assignments on the tetra graphs
    for interior in [(2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5)]:
        m = relation_matrix(tetra((2, 3, 6), interior))
        base = invariant_factors_of(m)
        for signs in itertools.product((1, -1), repeat=m.cols):
            flipped = IntegerMatrix.from_rows(
                [[x * signs[j] for j, x in enumerate(row)]
                 for row in m.entries])
            assert invariant_factors_of(flipped) == base


def test_invariant_factors_validation():
    with pytest.raises(ValueError):
        InvariantFactors((2, 3), 0)   # 3 not divisible by 2... 3 % 2 != 0
    with pytest.raises(ValueError):
        InvariantFactors((1,), 0)
    with pytest.raises(ValueError):
        InvariantFactors((), -1)
