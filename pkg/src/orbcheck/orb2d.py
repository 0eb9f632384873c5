"""Closed and mirrored 2-orbifolds with exact Euler characteristics.

A 2-orbifold here is a sphere with cone points, or a disk whose boundary is
either an ordinary boundary circle or a mirror, possibly carrying corner
reflectors.  Orders are exact integers and the Euler characteristic is an
exact rational, so the spherical / Euclidean / hyperbolic trichotomy is
decided without floating point.  Bad orbifolds (a sphere with one cone point,
or with two cone points of unequal orders, and the mirrored-disk duals) are
detected and reported as their own geometry class rather than raised as
errors, because the enumeration engines need to discard them silently.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class Base(enum.Enum):
    SPHERE = "S2"
    DISK = "D2"


class GeometryClass(enum.Enum):
    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"
    BAD = "bad"


@dataclass(frozen=True, order=True)
class TwoOrbifold:
    """Underlying sphere or disk plus cone-point and corner-reflector orders.

    Order multisets are canonically sorted on construction so equality is
    structural.  ``mirrored_boundary`` only makes sense for a disk; corner
    reflectors require a mirrored boundary.
    """

    base: Base
    cone_points: tuple[int, ...] = ()
    corner_reflectors: tuple[int, ...] = ()
    mirrored_boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cone_points", tuple(sorted(self.cone_points)))
        object.__setattr__(
            self, "corner_reflectors", tuple(sorted(self.corner_reflectors))
        )
        if any(n < 2 for n in self.cone_points):
            raise ValueError("cone point orders must be >= 2")
        if any(m < 2 for m in self.corner_reflectors):
            raise ValueError("corner reflector orders must be >= 2")
        if self.base is Base.SPHERE:
            if self.corner_reflectors:
                raise ValueError("a sphere has no corner reflectors")
            if self.mirrored_boundary:
                raise ValueError("a sphere has no boundary to mirror")
        if self.corner_reflectors and not self.mirrored_boundary:
            raise ValueError("corner reflectors require a mirrored boundary")

    def __str__(self):
        parts = ",".join(str(n) for n in self.cone_points)
        if self.base is Base.SPHERE:
            return f"S2({parts})"
        corners = ",".join(str(m) for m in self.corner_reflectors)
        if self.mirrored_boundary:
            return f"D2({parts};{corners})"
        return f"D2({parts})"


def sphere(*orders: int) -> TwoOrbifold:
    return TwoOrbifold(Base.SPHERE, tuple(orders))


def disk(cone_points: Iterable[int] = (), corner_reflectors: Iterable[int] = (),
         mirrored: bool = False) -> TwoOrbifold:
    return TwoOrbifold(Base.DISK, tuple(cone_points), tuple(corner_reflectors),
                       mirrored_boundary=mirrored or bool(tuple(corner_reflectors)))


def euler_characteristic(orb: TwoOrbifold) -> Fraction:
    """chi = chi(base) - sum(1 - 1/n_i) - (1/2) sum(1 - 1/m_j), exactly.

    chi(base) is 2 for the sphere and 1 for the disk (with or without
    mirror); cone points count fully, corner reflectors count half.
    """
    chi = Fraction(2 if orb.base is Base.SPHERE else 1)
    for n in orb.cone_points:
        chi -= 1 - Fraction(1, n)
    for m in orb.corner_reflectors:
        chi -= Fraction(1, 2) * (1 - Fraction(1, m))
    return chi


def is_bad(orb: TwoOrbifold) -> bool:
    """Teardrops and spindles, and their mirrored-disk duals.

    A sphere is bad with exactly one cone point, or with exactly two cone
    points of unequal orders.  A mirrored disk without cone points is bad
    with exactly one corner reflector, or two corner reflectors of unequal
    orders (its orientation double cover is then a bad sphere).
    """
    if orb.base is Base.SPHERE:
        cp = orb.cone_points
        if len(cp) == 1:
            return True
        return len(cp) == 2 and cp[0] != cp[1]
    if orb.mirrored_boundary and not orb.cone_points:
        cr = orb.corner_reflectors
        if len(cr) == 1:
            return True
        return len(cr) == 2 and cr[0] != cr[1]
    return False


def geometry_type(orb: TwoOrbifold) -> GeometryClass:
    if is_bad(orb):
        return GeometryClass.BAD
    chi = euler_characteristic(orb)
    if chi > 0:
        return GeometryClass.SPHERICAL
    if chi == 0:
        return GeometryClass.EUCLIDEAN
    return GeometryClass.HYPERBOLIC


def orientation_double_cover(orb: TwoOrbifold) -> TwoOrbifold:
    """Double a mirrored disk along its mirror boundary.

    Interior cone points appear twice, corner reflectors become single cone
    points of the same order.  Doubles chi exactly.
    """
    if orb.base is not Base.DISK or not orb.mirrored_boundary:
        raise ValueError("orientation double cover defined for mirrored disks")
    cones = tuple(orb.cone_points) * 2 + tuple(orb.corner_reflectors)
    return TwoOrbifold(Base.SPHERE, cones)


@functools.lru_cache(maxsize=1)
def euclidean_turnovers() -> tuple[TwoOrbifold, ...]:
    """The sphere orbifolds with three cone points and chi = 0.

    Computed by exhausting integer triples 2 <= p <= q <= r with
    1/p + 1/q + 1/r = 1: p <= 3 since 3/p >= 1, and q, r are bounded the
    same way, so the search is finite.
    """
    found = []
    p = 2
    while Fraction(3, p) >= 1:
        q = p
        while Fraction(1, p) + Fraction(2, q) >= 1:
            rest = 1 - Fraction(1, p) - Fraction(1, q)
            if rest > 0 and rest.numerator == 1:
                found.append(sphere(p, q, rest.denominator))
            q += 1
        p += 1
    return tuple(sorted(set(found)))


def is_euclidean_turnover(orb: TwoOrbifold) -> bool:
    return orb in euclidean_turnovers()
