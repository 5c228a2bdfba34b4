"""Quiver bundles over a point.

Finite simplicial quiver constructions, matrix representations over finite
fields, rationals and floats, finite-field point counts of the gauge
quotient, Nakajima moment maps and Higgs integrability.
"""
__version__ = "0.1.0"

from .rings import Floats, Matrix, PrimeField, QQ, Rationals, gl_order  # noqa: E402
from .simplicial import (  # noqa: E402
    Edge, SSet2, SSetMap, Triangle, glue_at_vertices, isomorphic, one_skeleton, opposite, simplex_operator,
    square, standard_simplex, validate,
)
from .quivers import FramingFn, LabeledShape, double, frame, higgs_shape, tilde  # noqa: E402
from .reps import (  # noqa: E402
    Rep, Triple, add, check_chain_coherence, compose_via_trace, count_reps, degenerate_along, enumerate_reps,
    oplus1, restrict_along, scale, tensor0, tensor1, triple_c, triple_e, triple_s, triple_t, validate_rep,
)
from .action import CountReport, GaugeElement, act, count_points, orbit_census, tilde_decode, tilde_encode  # noqa: E402
from .nakajima import (  # noqa: E402
    MomentExpr, SolveConfig, SolveResult, build_moment_map, equivariance_check, eval_moment, solve_zero_locus,
)
from .higgs import (  # noqa: E402
    HiggsDatum, HiggsMorphismDatum, compose_higgs_morphisms, higgs_morphism_check, higgs_to_diagram,
    integrability_check,
)
from .dsl import QuiverDoc, parse, print_doc  # noqa: E402
