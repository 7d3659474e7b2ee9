"""coarsehyp: desk-scale computations in coarse hyperbolic geometry.

Models (4-regular tree, hyperbolic plane, net cones over compact spaces),
Gromov products and hyperbolicity estimates, finite-scale boundaries with
visual metrics, and decision procedures for large-scale Lipschitz, radial,
visual, coarsely surjective and coarsely n-to-1 maps.
"""

__version__ = "0.1.0"

from .metric_core import (SpaceModel, HyperbolicityEstimate, gromov_product,
                          estimate_delta, check_basepoint_shift,
                          product_vs_geodesic)
from .sampling import ExhaustiveSample, SeededSample
from .hyperbolic_plane import HyperbolicPlane, PolarPoint
from .free_group_tree import (FreeGroupTree, Word, EdgePoint, BoundaryWord,
                              word_distance, edge_point_distance, sphere,
                              truncated_boundary)
from .maps import (SpaceMap, CantorPoint, CombTree, RadialExtensionSpec,
                   vertex_angle, map_vertex, map_edge_point, jump_bound,
                   measured_jump, cantor_map, radial_extension,
                   comb_counterexample, tree_fan_map)
from .hyperbolic_cone import (CompactModel, CantorModel, IntervalModel,
                              CircleModel, ApproxGraph, build_cone,
                              cone_boundary_product_check, lift_boundary_map,
                              product_escalation_table, load_compact_model)
from .boundary import (VisualMetricParams, BoundaryTruncation, CapacityCover,
                       visual_distance, u_membership, induce_boundary_map,
                       boundary_n_to_1_check, holder_fit, capacity_cover_check,
                       box_dimension_estimate, tree_truncation,
                       circle_truncation, cantor_truncation, cone_truncation)
from .checkers import (fit_lsl, fit_radial, check_radial_basepoint_independence,
                       check_visual, check_coarse_surjectivity,
                       check_coarsely_n_to_1, check_ray_stability,
                       fit_product_lower_bound)
from .report import PropertyReport, Verdict
