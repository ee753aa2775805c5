"""Terwilliger-algebra analysis of symmetric association schemes.

The pipeline: validate a scheme, detect its P- and Q-polynomial
orderings and spectral data, fix a base vertex to get the raising/flat/
lowering operators, decompose the standard module into irreducible
invariant subspaces, and compare the measured module parameters and
multiplicities against their closed forms.
"""

from .context import IdentityReport, TerwContext, build_context, triangle_vanishing_check, verify_operator_identities
from .decomposer import IrreducibleModule, census, decompose, measure_all, measure_module, norm_ladder_check
from .generators import folded_cube, load_scheme, odd_cycle, odd_graph, save_scheme, scheme_from_graph
from .multiplicity import (
    MultiplicityTable,
    Upsilon,
    build_upsilon,
    krein_product_lhs,
    recurrence_rhs_coefficient,
    solve_multiplicities,
    trace_lhs,
)
from .predictor import ModuleClass, feasibility, module_class, predict_a0star, predict_B, predict_Bstar
from .qs import ExclusionReport, QSParams, exclusion_check, fit_qs, qs_multiplicity, qs_predict_B, qs_predict_Bstar
from .scheme import AssociationScheme, IntersectionTensor, intersection_tensor, validate_scheme
from .spectral import (
    PPolyArray,
    SpectralData,
    detect_p_polynomial,
    detect_q_polynomial,
    intersection_array,
    is_almost_bipartite,
    spectral_data,
)

__version__ = "0.1.0"

__all__ = [
    "AssociationScheme",
    "ExclusionReport",
    "IdentityReport",
    "IntersectionTensor",
    "IrreducibleModule",
    "ModuleClass",
    "MultiplicityTable",
    "PPolyArray",
    "QSParams",
    "SpectralData",
    "TerwContext",
    "Upsilon",
    "build_context",
    "build_upsilon",
    "census",
    "decompose",
    "detect_p_polynomial",
    "detect_q_polynomial",
    "exclusion_check",
    "feasibility",
    "fit_qs",
    "folded_cube",
    "intersection_array",
    "intersection_tensor",
    "is_almost_bipartite",
    "krein_product_lhs",
    "load_scheme",
    "measure_all",
    "measure_module",
    "module_class",
    "norm_ladder_check",
    "odd_cycle",
    "odd_graph",
    "predict_B",
    "predict_Bstar",
    "predict_a0star",
    "qs_multiplicity",
    "qs_predict_B",
    "qs_predict_Bstar",
    "recurrence_rhs_coefficient",
    "save_scheme",
    "scheme_from_graph",
    "solve_multiplicities",
    "spectral_data",
    "trace_lhs",
    "triangle_vanishing_check",
    "validate_scheme",
    "verify_operator_identities",
]
