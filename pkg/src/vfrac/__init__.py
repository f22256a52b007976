"""Numerical toolkit for the truncated V-fractional derivative and integral."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .bounds import (
    Direction,
    InequalityReport,
    holder_check,
    remainder_product_bound,
    remainder_supnorm_bound,
    sup_norm,
)
from .corekernel import (
    Constants,
    ParamSet,
    derive_constants,
    gamma_fn,
    h_truncated,
    ml_truncated,
    pochhammer_gen,
    validate_params,
)
from .expr import diff, evaluate, parse, simplify, to_source
from .quadrature import QuadratureConfig, QuadratureResult
from .taylor import (
    TaylorExpansion,
    cauchy_kernel,
    remainder_identity_check,
    remainder_integral,
    remainder_report,
    remainder_series,
    taylor_eval,
    taylor_poly,
    variation_of_constants,
)
from .vcalc import (
    measure_coordinate,
    vderiv_closed,
    vderiv_expr,
    vderiv_limit,
    vderiv_n_expr,
    vintegral,
)

__all__ = [
    "__version__",
    "BACKEND",
    "Constants",
    "Direction",
    "InequalityReport",
    "ParamSet",
    "QuadratureConfig",
    "QuadratureResult",
    "TaylorExpansion",
    "cauchy_kernel",
    "derive_constants",
    "diff",
    "evaluate",
    "gamma_fn",
    "h_truncated",
    "holder_check",
    "measure_coordinate",
    "ml_truncated",
    "parse",
    "pochhammer_gen",
    "remainder_identity_check",
    "remainder_integral",
    "remainder_product_bound",
    "remainder_report",
    "remainder_series",
    "remainder_supnorm_bound",
    "simplify",
    "sup_norm",
    "taylor_eval",
    "taylor_poly",
    "to_source",
    "validate_params",
    "variation_of_constants",
    "vderiv_closed",
    "vderiv_expr",
    "vderiv_limit",
    "vderiv_n_expr",
    "vintegral",
]
