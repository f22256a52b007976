"""Hölder inequality and Taylor-remainder bounds for the V-fractional integral.

Each check returns an :class:`InequalityReport` with both sides evaluated
numerically. The verdict tolerates quadrature noise at equality cases:
``lhs <= rhs * (1 + 1e-9) + 1e-12``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import expr as ex
from . import kernels
from .corekernel import ParamSet, derive_constants
from .errors import ConjugateExponentError, DirectionMismatch
from .quadrature import QuadratureConfig, vectorize
from .taylor import derivative_chain
from .vcalc import measure_coordinate, vintegral

REL_SLACK = 1e-9
ABS_SLACK = 1e-12
CONJUGATE_TOL = 1e-12


class Direction(str, enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    ABSOLUTE = "absolute"


def verdict(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    context: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, name: str, lhs: float, rhs: float, context: dict[str, Any]) -> "InequalityReport":
        return cls(name, float(lhs), float(rhs), float(rhs - lhs), verdict(lhs, rhs), context)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "context": self.context,
        }


@dataclass(frozen=True)
class SupNormEstimate:
    value: float
    grid_points: int
    refined: bool


def _check_conjugate(r: float, s: float) -> None:
    if not (r > 1.0 and s > 1.0):
        raise ConjugateExponentError(f"exponents must exceed 1, got r={r}, s={s}")
    if abs(1.0 / r + 1.0 / s - 1.0) > CONJUGATE_TOL:
        raise ConjugateExponentError(f"1/r + 1/s must equal 1, got {1.0 / r + 1.0 / s!r}")


def _param_context(params: ParamSet) -> dict[str, Any]:
    return params.as_dict()


def holder_check(
    f: Callable,
    g: Callable,
    r: float,
    s: float,
    params: ParamSet,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
) -> InequalityReport:
    """``int |f g| d_omega <= (int |f|^r d_omega)^(1/r) (int |g|^s d_omega)^(1/s)``."""
    _check_conjugate(r, s)
    if a > b:
        raise ValueError(f"interval must satisfy a <= b, got [{a}, {b}]")
    fv, gv = vectorize(f), vectorize(g)
    lhs = vintegral(lambda x: np.abs(fv(x) * gv(x)), params, a, b, cfg)
    nf = vintegral(lambda x: np.abs(fv(x)) ** r, params, a, b, cfg)
    ng = vintegral(lambda x: np.abs(gv(x)) ** s, params, a, b, cfg)
    rhs = nf.value ** (1.0 / r) * ng.value ** (1.0 / s)
    name = "cauchy_schwarz" if r == 2.0 and s == 2.0 else "holder"
    ctx = {
        "params": _param_context(params),
        "interval": [float(a), float(b)],
        "r": float(r),
        "s": float(s),
        "quadrature_error": lhs.error_estimate + nf.error_estimate + ng.error_estimate,
    }
    return InequalityReport.build(name, lhs.value, rhs, ctx)


def _orient(x0: float, t: float, direction: Direction | str) -> Direction:
    direction = Direction(direction)
    if direction is Direction.FORWARD and t < x0:
        raise DirectionMismatch(f"forward bound needs t >= x0, got t={t}, x0={x0}")
    if direction is Direction.BACKWARD and t > x0:
        raise DirectionMismatch(f"backward bound needs t <= x0, got t={t}, x0={x0}")
    return direction


def _remainder_pieces(f: ex.Expr, params: ParamSet, n: int, x0: float):
    chain = derivative_chain(f, params, n + 1)
    top = chain[-1]
    scaled = np.array(
        [float(ex.evaluate(d, x0)) / math.factorial(k) for k, d in enumerate(chain[:-1])]
    )

    def remainder(x):
        x = np.asarray(x, dtype=float)
        u = measure_coordinate(params, x, x0)
        return ex.evaluate(f, x) - kernels.horner(scaled, np.atleast_1d(u)).reshape(x.shape)

    def top_value(x):
        return ex.evaluate(top, x)

    return remainder, top_value


def _product_lhs(remainder, top_value, params, lo, hi, cfg):
    return vintegral(lambda x: np.abs(remainder(x)) * np.abs(top_value(x)), params, lo, hi, cfg)


_THEOREM = {
    Direction.FORWARD: "remainder_product_forward",
    Direction.BACKWARD: "remainder_product_backward",
    Direction.ABSOLUTE: "remainder_product_absolute",
}
_SUP_THEOREM = {
    Direction.FORWARD: "remainder_supnorm_forward",
    Direction.BACKWARD: "remainder_supnorm_backward",
    Direction.ABSOLUTE: "remainder_supnorm_absolute",
}


def product_bound_rhs(
    params: ParamSet, n: int, r: float, s: float, x0: float, t: float, moment: float,
    *, corrected: bool = False,
) -> float:
    """Right-hand side of the Hölder-type remainder bound.

    ``moment`` is ``int |V^{n+1} f|^s d_omega`` over the interval between
    ``x0`` and ``t``. With ``corrected=True`` the result carries the extra
    factor ``mu**(2/r)`` that the weighted measure contributes.
    """
    mu = derive_constants(params).mu
    alpha = params.alpha
    gap = abs(t**alpha - x0**alpha)
    power = n + 2.0 / r
    denom = (
        2.0 ** (1.0 / s)
        * alpha**power
        * math.factorial(n)
        * ((n * r + 1.0) * (n * r + 2.0)) ** (1.0 / r)
    )
    rhs = mu**n * gap**power / denom * moment ** (2.0 / s)
    if corrected:
        rhs *= mu ** (2.0 / r)
    return rhs


def corollary_product_rhs(
    params: ParamSet, n: int, x0: float, t: float, moment: float, *, corrected: bool = False
) -> float:
    """The ``r = s = 2`` specialization written in closed form."""
    mu = derive_constants(params).mu
    alpha = params.alpha
    gap = abs(t**alpha - x0**alpha)
    rhs = (
        mu**n * gap ** (n + 1)
        / (2.0 * alpha ** (n + 1) * math.factorial(n) * math.sqrt((2 * n + 1) * (n + 1)))
        * moment
    )
    if corrected:
        rhs *= mu
    return rhs


def remainder_product_bound(
    f: ex.Expr,
    params: ParamSet,
    n: int,
    r: float,
    s: float,
    x0: float,
    t: float,
    direction: Direction | str = Direction.FORWARD,
    cfg: QuadratureConfig | None = None,
    *,
    corrected: bool = False,
) -> InequalityReport:
    """Hölder-type bound on ``int |R_{n,f}(x0, .)| |V^{n+1} f| d_omega``.

    ``direction`` selects the forward (``t >= x0``), backward (``t <= x0``)
    or absolute-value form. By default the right-hand side uses the
    published constant; ``corrected=True`` restores the ``mu**(2/r)``
    factor lost when integrating the kernel against ``d_omega``.
    """
    if n < 0:
        raise ValueError(f"remainder order must be >= 0, got {n}")
    _check_conjugate(r, s)
    direction = _orient(x0, t, direction)
    lo, hi = min(x0, t), max(x0, t)
    remainder, top_value = _remainder_pieces(f, params, n, x0)
    lhs = _product_lhs(remainder, top_value, params, lo, hi, cfg)
    moment = vintegral(lambda x: np.abs(top_value(x)) ** s, params, lo, hi, cfg)
    rhs = product_bound_rhs(params, n, r, s, x0, t, moment.value, corrected=corrected)
    ctx = {
        "params": _param_context(params),
        "function": ex.to_source(f),
        "n": n,
        "r": float(r),
        "s": float(s),
        "x0": float(x0),
        "t": float(t),
        "direction": direction.value,
        "corrected": corrected,
        "quadrature_error": lhs.error_estimate + moment.error_estimate,
    }
    return InequalityReport.build(_THEOREM[direction], lhs.value, rhs, ctx)


def sup_norm(f: Callable, a: float, b: float, initial_grid: int = 1025) -> SupNormEstimate:
    """``max |f|`` on ``[a, b]``: uniform grid, then bounded scalar polish
    around the three largest grid values."""
    if a > b:
        raise ValueError(f"interval must satisfy a <= b, got [{a}, {b}]")
    fv = vectorize(f)
    if a == b:
        return SupNormEstimate(float(abs(fv(np.array([a]))[0])), 1, False)
    n = max(int(initial_grid), 3)
    xs = np.linspace(a, b, n)
    ys = np.abs(fv(xs))
    best = float(ys.max())
    step = xs[1] - xs[0]

    def absf(x: float) -> float:
        return float(abs(fv(np.array([x]))[0]))

    order = np.argsort(ys)[::-1][:3]
    for idx in order:
        lo = max(a, xs[idx] - step)
        hi = min(b, xs[idx] + step)
        res = minimize_scalar(lambda x: -absf(x), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return SupNormEstimate(best, n, True)


def supnorm_bound_rhs(
    params: ParamSet, n: int, x0: float, t: float, norm: float, *, corrected: bool = False
) -> float:
    mu = derive_constants(params).mu
    alpha = params.alpha
    gap = abs(t**alpha - x0**alpha)
    rhs = mu**n * gap ** (n + 2) / (alpha ** (n + 2) * math.factorial(n + 2)) * norm**2
    if corrected:
        rhs *= mu**2
    return rhs


def remainder_supnorm_bound(
    f: ex.Expr,
    params: ParamSet,
    n: int,
    x0: float,
    t: float,
    direction: Direction | str = Direction.FORWARD,
    cfg: QuadratureConfig | None = None,
    *,
    a: float | None = None,
    b: float | None = None,
    corrected: bool = False,
) -> InequalityReport:
    """Sup-norm (``r = 1``, ``s = inf``) bound on the same left-hand side.

    The norm of ``V^{n+1} f`` is taken over ``[x0, b]`` (forward),
    ``[a, x0]`` (backward) or ``[a, b]`` (absolute); omitted endpoints
    default to the interval spanned by ``x0`` and ``t``.
    """
    if n < 0:
        raise ValueError(f"remainder order must be >= 0, got {n}")
    direction = _orient(x0, t, direction)
    lo, hi = min(x0, t), max(x0, t)
    if direction is Direction.FORWARD:
        span = (x0, hi if b is None else b)
    elif direction is Direction.BACKWARD:
        span = (lo if a is None else a, x0)
    else:
        span = (lo if a is None else a, hi if b is None else b)
    if span[0] > lo or span[1] < hi:
        raise ValueError(f"norm interval {span} must contain [{lo}, {hi}]")
    remainder, top_value = _remainder_pieces(f, params, n, x0)
    lhs = _product_lhs(remainder, top_value, params, lo, hi, cfg)
    norm = sup_norm(top_value, span[0], span[1])
    rhs = supnorm_bound_rhs(params, n, x0, t, norm.value, corrected=corrected)
    ctx = {
        "params": _param_context(params),
        "function": ex.to_source(f),
        "n": n,
        "x0": float(x0),
        "t": float(t),
        "direction": direction.value,
        "norm_interval": [float(span[0]), float(span[1])],
        "sup_norm": norm.value,
        "corrected": corrected,
        "quadrature_error": lhs.error_estimate,
    }
    return InequalityReport.build(_SUP_THEOREM[direction], lhs.value, rhs, ctx)
