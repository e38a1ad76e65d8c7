"""Adaptive Levin quadrature for bivariate oscillatory integrals.

Evaluates integrals of f(x,y) exp(i g(x,y)) over rectangles by per-fiber
Levin collocation with quad-tree refinement, with a univariate adaptive
Levin integrator for the boundary reductions and an adaptive Gauss-Legendre
oracle for verification.

The compiled kernel backend is selected at import time; set
OSCQUAD_DISABLE_NUMBA=1 to force the pure-numpy fallback.
"""

from .adapt import AdaptiveConfig, AdaptiveResult, MeshRecord, adaptive_integrate, mesh_dump
from .bench import SweepRow, emit_report, log_lambda_grid, parse_report, run_sweep
from .catalog import ENTRIES, CatalogEntry, closed_form_arctan, get_entry
from .errors import ConvergenceError, EvaluationError
from .geometry import Rectangle
from .levin1d import (
    Levin1DConfig,
    Levin1DResult,
    Oscillator1D,
    levin1d_adaptive,
    levin1d_fixed,
)
from .levin2d import (
    Integrand2D,
    RectEstimate,
    choose_direction,
    delaminated_estimate,
    nondelaminated_estimate,
)
from .linsolve import (
    SolveConfig,
    TruncatedSolve,
    diag_iteration_solve,
    rrqr_solve,
    tsvd_solve,
    two_norm,
)
from .oracle import (
    GaussResult,
    GaussRule,
    adaptive_gauss,
    adaptive_gauss_1d,
    adaptive_gauss_result,
    gauss_rect,
    gauss_rule,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveConfig",
    "AdaptiveResult",
    "CatalogEntry",
    "ConvergenceError",
    "ENTRIES",
    "EvaluationError",
    "GaussResult",
    "GaussRule",
    "Integrand2D",
    "Levin1DConfig",
    "Levin1DResult",
    "MeshRecord",
    "Oscillator1D",
    "RectEstimate",
    "Rectangle",
    "SolveConfig",
    "SweepRow",
    "TruncatedSolve",
    "adaptive_gauss",
    "adaptive_gauss_1d",
    "adaptive_gauss_result",
    "adaptive_integrate",
    "choose_direction",
    "closed_form_arctan",
    "delaminated_estimate",
    "diag_iteration_solve",
    "emit_report",
    "gauss_rect",
    "gauss_rule",
    "get_entry",
    "levin1d_adaptive",
    "levin1d_fixed",
    "log_lambda_grid",
    "mesh_dump",
    "nondelaminated_estimate",
    "parse_report",
    "rrqr_solve",
    "run_sweep",
    "tsvd_solve",
    "two_norm",
    "__version__",
]
