"""Single table of the classification rules quoted in reports.

Every verdict and exclusion certificate cites rules by key; keeping the
statements here means output wording changes touch one file.
"""

RULES = {
    "spherical-links": (
        "Vertex link restriction",
        "the link of each trivalent vertex of the singular graph must be a "
        "spherical 2-orbifold"),
    "h1-quotient-z2": (
        "Homology restriction",
        "an orientable orbifold with cusp section S2(2,3,6) that is covered "
        "by a knot complement has first homology a quotient of Z/2"),
    "h1-rigid-cusp": (
        "Homology restriction by rigid cusp type",
        "an orientable orbifold covered by a knot complement has first "
        "homology a quotient of Z/2, Z/3 or Z/4 when its cusp section is "
        "S2(2,3,6), S2(3,3,3) or S2(2,4,4) respectively"),
    "symmetry-reduction": (
        "Symmetry reduction",
        "a labeling with a nontrivial label-preserving involution covers a "
        "smaller reflection orbifold; the quotient is analyzed in its place"),
    "regular-cover-dihedral": (
        "Regular cover restriction",
        "an orientable orbifold regularly covered by a knot complement has "
        "cusp cross-section a torus or S2(2,2,2,2), and the covering group "
        "is cyclic or dihedral"),
    "forced-quad-pattern": (
        "Forced quadrilateral pattern",
        "a dihedral quotient with cusp S2(2,2,2,2) has singular set two "
        "order-2 lines joined by two arcs"),
    "quad-essential-d22": (
        "Essential disk with two cone points",
        "the two opposite order-2 sides of the forced quadrilateral are "
        "disjoint, so a properly embedded disk with two order-2 cone points "
        "separates them, contradicting hyperbolicity"),
    "barrier-rule": (
        "Separated one-cycles",
        "two disjoint 1-cycles of the singular set separated by an embedded "
        "sphere force an incompressible 2-suborbifold"),
    "outermost-arc": (
        "Outermost arc rule",
        "each outermost arc of the singular set in the reflection disk has "
        "exactly three edges"),
    "turnover-cusp": (
        "Rigid cusp types",
        "a rigid cusp cross-section is one of the Euclidean turnovers "
        "S2(2,3,6), S2(2,4,4), S2(3,3,3)"),
    "reflection-compatible": (
        "Reflection compatibility",
        "the minimal orientable orbifold admits an orientation-reversing "
        "involution fixing the reflection disk"),
    "no-rotational-symmetry": (
        "Minimality of the orientable quotient",
        "the minimal orientable orbifold admits no orientation-preserving "
        "symmetry; labelings with one are excluded"),
    "fig8-arithmetic": (
        "Arithmetic survivor",
        "the S2(2,3,6)-cusped labeling with third index 3 is the arithmetic "
        "orbifold covered by the figure-eight knot complement"),
    "dodecahedral": (
        "Dodecahedral survivor",
        "the S2(2,3,6)-cusped labeling with third index 5 is the minimal "
        "orbifold in the commensurability class of the dodecahedral knots"),
    "whitehead-no-knots": (
        "Whitehead class",
        "the surviving S2(2,4,4)-cusped labeling is the minimal element of "
        "the Whitehead link commensurability class, which contains no knot "
        "complements"),
    "ap-cover-tetrahedral": (
        "AP knots over reflection orbifolds",
        "if the complement of a hyperbolic AP knot covers a reflection "
        "orbifold, the orbifold is one-cusped tetrahedral and the knot is "
        "the figure-eight or a dodecahedral knot"),
    "achiral-236": (
        "Achiral knots with S2(2,3,6) quotients",
        "an achiral hyperbolic AP knot whose complement covers an orientable "
        "orbifold with cusp S2(2,3,6) is the figure-eight or a dodecahedral "
        "knot"),
    "small-nonarithmetic": (
        "Small non-arithmetic knots",
        "no small, hyperbolic, non-arithmetic knot complement covers a "
        "reflection orbifold"),
}


def rule(key: str) -> dict:
    title, statement = RULES[key]
    return {"rule": key, "title": title, "statement": statement}


def chain(*keys: str) -> list[dict]:
    return [rule(k) for k in keys]
