"""Combinatorial classification of one-cusped hyperbolic reflection
orbifolds and rigid-cusped minimal orbifolds."""

__version__ = "0.1.0"

from .orb2d import (Base, GeometryClass, TwoOrbifold, disk,
                    euclidean_turnovers, euler_characteristic, geometry_type,
                    is_bad, is_euclidean_turnover, orientation_double_cover,
                    sphere)
from .siggraph import (AmbientInvolution, Edge, Involution, LabeledGraph,
                       TetraPattern, VertexKind, ambient_involutions,
                       check_spherical_links, cusp_cross_section, dump_graph,
                       from_tetra, load_graph, quotient_by_involution,
                       symmetries, vertex_link)
from .homology import (IntegerMatrix, InvariantFactors, h1,
                       invariant_factors_of, passes_restriction_two,
                       relation_matrix, smith_normal_form)
from .barrier import (BarrierViolation, Context, CycleKind, OneCycle,
                      ViolationCase, find_violation, one_cycles)
from .geomvol import (CoxeterTetrahedron, RealizabilityClass,
                      RealizabilityReport, lobachevsky, realizability,
                      tetrahedron_from_pattern, volume)
from .enumerator import (Candidate, ExclusionCertificate, ModelFamily,
                         VerdictKind, classify_tetrahedral, decision_tree,
                         enumerate_areflection_models, enumerate_shapes,
                         exclude_quadrilateral_type, forced_quad_locus)
