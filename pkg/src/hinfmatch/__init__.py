"""Structured H-infinity model matching problems whose optimum is not rational.

For ``L0 = I + a J`` and ``L1 = b J`` with a diagonal stable ``Q``, the
optimal cost ``gamma*`` and the optimal controller are obtained from the
conformal map of the disc onto a lens; rational controllers only approach
``gamma*``.
"""

from .approximation import (
    GapPoint,
    TaylorExtract,
    gap_sequence,
    normalize_to_X,
    pulled_back_derivative,
    schwarz_derivative,
    taylor_coeffs,
)
from .complex_core import (
    Matrix2,
    RationalFunction,
    RealPolynomial,
    TruncatedSeries,
    polynomial_roots,
    principal_power,
    rational_eval,
    series_compose,
    series_multiply,
    series_power,
    series_reciprocal,
    sigma_max_2x2,
)
from .conformal import (
    LensParams,
    lens_contains,
    lens_derivative_at_zero,
    lens_map,
    lens_map_inv,
)
from .estimators import LensMap, StructuredHinfSolver
from .hinf_norm import (
    BoundarySamples,
    DiagonalController,
    DiscSamples,
    NormEstimate,
    ProblemInstance,
    hinf_norm,
    matching_value,
    symmetric_norm,
    uniqueness_gap_check,
)
from .interpolation import (
    InterpolationData,
    SolveResult,
    cf_feasible,
    construct_optimal_S,
    feasibility_threshold,
    pick_feasible,
    recover_p,
    reduce_instance,
    solve_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySamples",
    "DiagonalController",
    "DiscSamples",
    "GapPoint",
    "InterpolationData",
    "LensMap",
    "LensParams",
    "Matrix2",
    "NormEstimate",
    "ProblemInstance",
    "RationalFunction",
    "RealPolynomial",
    "SolveResult",
    "StructuredHinfSolver",
    "TaylorExtract",
    "TruncatedSeries",
    "cf_feasible",
    "construct_optimal_S",
    "feasibility_threshold",
    "gap_sequence",
    "hinf_norm",
    "lens_contains",
    "lens_derivative_at_zero",
    "lens_map",
    "lens_map_inv",
    "matching_value",
    "normalize_to_X",
    "pick_feasible",
    "polynomial_roots",
    "principal_power",
    "pulled_back_derivative",
    "rational_eval",
    "recover_p",
    "reduce_instance",
    "schwarz_derivative",
    "series_compose",
    "series_multiply",
    "series_power",
    "series_reciprocal",
    "sigma_max_2x2",
    "solve_gamma",
    "symmetric_norm",
    "taylor_coeffs",
    "uniqueness_gap_check",
    "__version__",
]
