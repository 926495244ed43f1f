"""Finite T0 models of mapping spaces, McCord functors, and isotopies by moves.

Everything is exact: points and endpoints are ``fractions.Fraction``.
"""
from .regions import PointSet, Region
from .metric import (CIRCLE, INTERVAL, CircleSpace, ClassMap, Cover, FiniteMetricSpace,
                     IncompatibleThreadError, IntervalSpace, MetricError, NotNestedError,
                     QuotientSpace, bonding_projection, build_cover, minimal_cover_intersection,
                     quotient, set_distance, thread_intersection)
from .plmap import PLMap, interpolate
from .posets import (FinitePoset, MonotoneMap, Move, PosetAutomorphism, PosetError, as_move,
                     automorphisms, is_automorphism, is_continuous, is_move, minimal_open)
from .model import (EMPTY, EXHAUSTIVE, ModelError, ModelIndex, ModelStage, RectangularMapSet,
                    TotalOrderViolation, TruncatedThread, bond, bond_map, check_thread,
                    enumerate_W, export_element, import_element, injectivity_witness,
                    interval_W_pattern, model_leq, project, retract, stage_poset)
from .mccord import (HomologyResult, SimplicialComplex, SimplicialMap, barycentric_subdivision,
                     chain_map, face_poset, homology, induced_poset_map, induced_simplicial_map,
                     order_complex)
from .isotopy import (ConstructionFailure, FiniteIsotopy, InvalidIsotopy, InvalidSample,
                      MetricIsotopySample, MoveDecomposition, NoBijection, ResolutionExhausted,
                      approximate_isotopy, decompose_moves, select_bijection, slice_at,
                      validate_isotopy)

__version__ = "0.1.0"
