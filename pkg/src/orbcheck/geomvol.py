"""Gram matrices, realizability, and hyperbolic volume of labeled Coxeter
tetrahedra.

A tetrahedron is described by the six reflection orders n_e >= 2 on its
edges, indexed by the pair of faces meeting there; the dihedral angle is
pi/n_e and the Gram matrix has unit diagonal and entries -cos(pi/n_e).  A
finite-volume hyperbolic tetrahedron has Gram signature (3,1), every vertex
link spherical (finite vertex) or Euclidean (ideal vertex), and its volume
is computed exactly in terms of the Lobachevsky function by decomposing the
cone from an ideal vertex into sectors, each an ideal-apex orthoscheme.

Vertex links are decided by the integer geometry trichotomy, never by a
numerical determinant test; the signature is computed numerically at a tight
tolerance with an exact algebraic cross-check available for the small orders
where Gram entries are quadratic irrationalities.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

import sympy

from .orb2d import GeometryClass, geometry_type, sphere

_FACE_PAIRS = tuple((i, j) for i in range(4) for j in range(i + 1, 4))


class RealizabilityClass(enum.Enum):
    HYPERBOLIC_FINITE_VOLUME = "hyperbolic-finite-volume"
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    NOT_REALIZABLE = "not-realizable"


@dataclass(frozen=True)
class CoxeterTetrahedron:
    """labels[(i, j)] = reflection order on the edge where faces i, j meet."""

    labels: tuple[tuple[tuple[int, int], int], ...]

    @staticmethod
    def from_dict(d) -> "CoxeterTetrahedron":
        norm = {}
        for (i, j), n in d.items():
            if n < 2:
                raise ValueError("edge orders must be >= 2")
            norm[(min(i, j), max(i, j))] = int(n)
        if sorted(norm) != list(_FACE_PAIRS):
            raise ValueError("need exactly the six face pairs of a tetrahedron")
        return CoxeterTetrahedron(tuple(sorted(norm.items())))

    def label(self, i: int, j: int) -> int:
        return dict(self.labels)[(min(i, j), max(i, j))]

    def gram(self) -> np.ndarray:
        g = np.eye(4)
        for (i, j), n in self.labels:
            g[i, j] = g[j, i] = -math.cos(math.pi / n)
        return g

    def vertex_link(self, v: int):
        """Cone orders at vertex v: the labels of its three edges, which are
        the face pairs avoiding v."""
        orders = [n for (i, j), n in self.labels if v not in (i, j)]
        return sphere(*orders)

    def relabeled(self, perm) -> "CoxeterTetrahedron":
        """Apply a permutation of the four vertices (= faces)."""
        d = {}
        for (i, j), n in self.labels:
            d[(perm[i], perm[j])] = n
        return CoxeterTetrahedron.from_dict(d)


def tetrahedron_from_pattern(pattern) -> CoxeterTetrahedron:
    """Face 0 is opposite the ideal vertex; finite vertex i carries the
    peripheral label cusp[i-1], and the interior label l_jk sits on the edge
    joining finite vertices j and k, which is the face pair complementary to
    {j, k}."""
    a, b, c = pattern.cusp.cone_points
    l_bc, l_ca, l_ab = pattern.interior
    d = {
        (2, 3): a,   # edge from ideal vertex to finite vertex 1
        (1, 3): b,
        (1, 2): c,
        (0, 1): l_bc,  # edge joining finite vertices 2, 3
        (0, 2): l_ca,
        (0, 3): l_ab,
    }
    return CoxeterTetrahedron.from_dict(d)


@dataclass(frozen=True)
class RealizabilityReport:
    klass: RealizabilityClass
    signature: tuple[int, int, int]      # (positive, negative, zero)
    ideal_vertices: tuple[int, ...]
    link_classes: tuple[GeometryClass, ...]


_SIG_TOL = 1e-12


def gram_signature(t: CoxeterTetrahedron, tol: float = _SIG_TOL):
    ev = np.linalg.eigvalsh(t.gram())
    pos = int((ev > tol).sum())
    neg = int((ev < -tol).sum())
    return (pos, neg, 4 - pos - neg)


def gram_signature_exact(t: CoxeterTetrahedron):
    """Signature via exact arithmetic on the algebraic Gram entries.

    Counts positive and negative eigenvalues by Descartes' rule on the exact
    characteristic polynomial (valid because symmetric matrices have real
    spectra); usable for any orders since cos(pi/n) is algebraic.
    """
    m = sympy.Matrix(4, 4, lambda i, j: sympy.Integer(1) if i == j
                     else -sympy.cos(sympy.pi / t.label(i, j)))
    lam = sympy.Symbol("lam")
    p = m.charpoly(lam).as_expr()
    coeffs = sympy.Poly(p, lam).all_coeffs()
    signs = []
    for c in coeffs:
        c = sympy.nsimplify(c)
        if c.equals(0) or sympy.simplify(c) == 0:
            signs.append(0)
        else:
            signs.append(1 if c.evalf(60) > 0 else -1)
    zero = 0
    while signs and signs[-1] == 0:
        signs.pop()
        zero += 1
    nonzero = [s for s in signs if s != 0]
    pos = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    neg = 4 - zero - pos
    return (pos, neg, zero)


def realizability(t: CoxeterTetrahedron) -> RealizabilityReport:
    links = tuple(geometry_type(t.vertex_link(v)) for v in range(4))
    ideal = tuple(v for v in range(4) if links[v] is GeometryClass.EUCLIDEAN)
    sig = gram_signature(t)
    exact_orders = all(n in (2, 3, 4, 6) for _, n in t.labels)
    if exact_orders:
        sig = gram_signature_exact(t)
    if sig[:2] == (4, 0):
        klass = RealizabilityClass.SPHERICAL
    elif sig[:2] == (3, 1):
        if all(l in (GeometryClass.SPHERICAL, GeometryClass.EUCLIDEAN)
               for l in links):
            klass = RealizabilityClass.HYPERBOLIC_FINITE_VOLUME
        else:
            klass = RealizabilityClass.NOT_REALIZABLE
    elif sig[2] > 0 and sig[1] == 0:
        klass = RealizabilityClass.EUCLIDEAN
    else:
        klass = RealizabilityClass.NOT_REALIZABLE
    return RealizabilityReport(klass, sig, ideal, links)


# ---------------------------------------------------------------------------
# Lobachevsky function
# ---------------------------------------------------------------------------

def lobachevsky(theta: float) -> float:
    """L(t) = -int_0^t log|2 sin u| du, via the classical series

        L(t) = t - t log(2t) + sum_{n>=1} zeta(2n)/(n(2n+1)) t^(2n+1)/pi^(2n)

    after odd, pi-periodic reduction to |t| <= pi/2, where the series
    converges geometrically (ratio (t/pi)^2 <= 1/4).
    """
    if not math.isfinite(theta):
        raise ValueError("argument must be finite")
    t = math.fmod(theta, math.pi)
    if t > math.pi / 2:
        t -= math.pi
    elif t < -math.pi / 2:
        t += math.pi
    if t == 0.0:
        return 0.0
    sign = -1.0 if t < 0 else 1.0
    x = abs(t)
    total = x - x * math.log(2.0 * x)
    power = x
    for n in range(1, 100):
        power *= (x / math.pi) ** 2
        term = zeta(2 * n) / (n * (2 * n + 1)) * power
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return sign * total


def _sector(psi: float, phi: float) -> float:
    """Hyperbolic volume above the unit hemisphere over the plane sector
    bounded by the foot direction of a wall line at distance cos(phi) and
    the ray at signed angle psi from it; odd in psi.  Each sector is an
    orthoscheme with ideal apex, whence the three-term Lobachevsky value."""
    return 0.25 * (lobachevsky(phi + psi) - lobachevsky(phi - psi)
                   + 2.0 * lobachevsky(math.pi / 2 - psi))


def _wall_triangle(t: CoxeterTetrahedron, apex: int):
    """Euclidean data of the cusp cross-section triangle for the given ideal
    apex, normalized so the opposite face is the unit hemisphere about the
    origin: corner angles, outward wall normals, and wall distances."""
    others = [v for v in range(4) if v != apex]
    # corner angle at finite vertex m: order on the edge (apex, m), i.e. the
    # face pair complementary to {apex, m}
    def corner_angle(m):
        i, j = [x for x in range(4) if x not in (apex, m)]
        return math.pi / t.label(i, j)
    # wall m contains the other two corners; its floor dihedral sits on the
    # edge joining them, the face pair {apex, m}
    def wall_dihedral(m):
        return math.pi / t.label(apex, m)
    A = {m: corner_angle(m) for m in others}
    if abs(sum(A.values()) - math.pi) > 1e-9:
        raise ValueError("apex vertex link is not Euclidean")
    m1, m2, m3 = others
    eta = {m1: 0.0, m2: math.pi - A[m3], m3: 2 * math.pi - A[m3] - A[m1]}
    normals = {m: np.array([math.cos(eta[m]), math.sin(eta[m])]) for m in others}
    dists = {m: math.cos(wall_dihedral(m)) for m in others}
    return others, A, normals, dists


def volume(t: CoxeterTetrahedron) -> float:
    """Volume of a finite-volume hyperbolic tetrahedron with an ideal vertex.

    Put the ideal vertex at infinity in the upper half-space: the tetrahedron
    is the region over its cusp triangle above the unit hemisphere of the
    opposite face.  Splitting the triangle into signed sectors at the
    hemisphere's center turns the volume into six Lobachevsky terms; the
    formula is exact, so accuracy is that of the series (about 1e-15).
    """
    report = realizability(t)
    if report.klass is not RealizabilityClass.HYPERBOLIC_FINITE_VOLUME:
        raise ValueError(f"tetrahedron is {report.klass.value}, not hyperbolic")
    if not report.ideal_vertices:
        raise ValueError("volume needs an ideal vertex to cone from")
    apex = report.ideal_vertices[0]
    others, A, normals, dists = _wall_triangle(t, apex)
    corners = {}
    for m in others:
        js = [x for x in others if x != m]
        mat = np.array([normals[js[0]], normals[js[1]]])
        rhs = np.array([dists[js[0]], dists[js[1]]])
        corners[m] = np.linalg.solve(mat, rhs)
    total = 0.0
    for f in others:
        d = dists[f]
        phi = math.acos(max(-1.0, min(1.0, d)))
        tau = np.array([-normals[f][1], normals[f][0]])
        psis = sorted(math.atan2(float(np.dot(corners[m], tau)), d)
                      for m in others if m != f)
        total += _sector(psis[1], phi) - _sector(psis[0], phi)
    return total
