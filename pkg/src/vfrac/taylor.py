"""Fractional Taylor expansion, its remainder, and the Cauchy kernel.

Throughout, the generalized monomial variable is
``u(t; s) = mu * (t**alpha - s**alpha) / alpha`` and the remainder
``R_{n,f}(center, point)`` takes the expansion center first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import expr as ex
from . import kernels
from .corekernel import ParamSet
from .quadrature import QuadratureConfig, QuadratureResult, vectorize
from .vcalc import measure_coordinate, vderiv_expr, vintegral


@dataclass(frozen=True)
class TaylorExpansion:
    params: ParamSet
    center: float
    order: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("TaylorExpansion needs exactly order + 1 coefficients")

    def __call__(self, t):
        return taylor_eval(self, t)


@dataclass(frozen=True)
class RemainderReport:
    series_value: float
    integral_value: float
    integral_error_estimate: float
    discrepancy: float


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of an integral identity and their gap."""

    name: str
    lhs: float
    rhs: float
    difference: float
    error_estimate: float
    context: dict[str, Any] = field(default_factory=dict)

    def holds(self, tol: float = 1e-7) -> bool:
        return self.difference <= max(tol, self.error_estimate)


def derivative_chain(f: ex.Expr, params: ParamSet, n: int) -> list[ex.Expr]:
    """``[f, Vf, ..., V^n f]`` as simplified expressions."""
    chain = [f]
    for _ in range(n):
        chain.append(vderiv_expr(chain[-1], params))
    return chain


def cauchy_kernel(params: ParamSet, m: int, t, s):
    """``u(t; s)**(m-1) / (m-1)!``; vectorized over ``t`` and ``s``."""
    if m < 1:
        raise ValueError(f"equation order m must be >= 1, got {m}")
    u = measure_coordinate(params, t, s)
    value = np.power(u, m - 1) / math.factorial(m - 1)
    return float(value) if np.ndim(value) == 0 else value


def variation_of_constants(
    g: Callable,
    params: ParamSet,
    m: int,
    s: float,
    t: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Solution at ``t`` of ``V^m y = g`` with ``V^j y(s) = 0`` for ``j < m``."""
    gv = vectorize(g)

    def integrand(tau):
        return cauchy_kernel(params, m, t, tau) * gv(tau)

    return vintegral(integrand, params, s, t, cfg).value


def taylor_poly(f: ex.Expr, params: ParamSet, n: int, s: float) -> TaylorExpansion:
    if n < 0:
        raise ValueError(f"Taylor order must be >= 0, got {n}")
    chain = derivative_chain(f, params, n)
    coeffs = tuple(float(ex.evaluate(d, s)) for d in chain)
    return TaylorExpansion(params=params, center=float(s), order=n, coeffs=coeffs)


def _scaled(coeffs) -> np.ndarray:
    return np.array([c / math.factorial(k) for k, c in enumerate(coeffs)], dtype=float)


def taylor_eval(T: TaylorExpansion, t):
    """Horner evaluation in ``u(t; center)``."""
    u = measure_coordinate(T.params, np.asarray(t, dtype=float), T.center)
    value = kernels.horner(_scaled(T.coeffs), np.atleast_1d(u))
    return float(value[0]) if np.ndim(t) == 0 else value


def remainder_series(f: ex.Expr, params: ParamSet, n: int, t: float, s):
    """``f(s) - sum_k V^k f(t) / k! * u(s; t)**k``; ``n = -1`` gives ``f(s)``.

    ``t`` is the expansion center, ``s`` the evaluation point (array ok).
    """
    if n < -1:
        raise ValueError(f"remainder order must be >= -1, got {n}")
    fs = ex.evaluate(f, s)
    if n == -1:
        return fs
    T = taylor_poly(f, params, n, t)
    return fs - taylor_eval(T, s)


def _remainder_integral(
    f: ex.Expr, params: ParamSet, n: int, t: float, s: float, cfg: QuadratureConfig | None
) -> QuadratureResult:
    if n < 0:
        raise ValueError(f"integral remainder needs n >= 0, got {n}")
    top = derivative_chain(f, params, n + 1)[-1]
    fact = math.factorial(n)

    def integrand(tau):
        return np.power(measure_coordinate(params, s, tau), n) / fact * ex.evaluate(top, tau)

    # oriented: int_t^s = -int_s^t when s < t
    return vintegral(integrand, params, t, s, cfg)


def remainder_integral(
    f: ex.Expr,
    params: ParamSet,
    n: int,
    t: float,
    s: float,
    cfg: QuadratureConfig | None = None,
) -> float:
    """``(1/n!) int_t^s u(s; tau)**n V^{n+1} f(tau) d_omega tau``."""
    return _remainder_integral(f, params, n, t, s, cfg).value


def remainder_report(
    f: ex.Expr,
    params: ParamSet,
    n: int,
    t: float,
    s: float,
    cfg: QuadratureConfig | None = None,
) -> RemainderReport:
    series = float(remainder_series(f, params, n, t, s))
    res = _remainder_integral(f, params, n, t, s, cfg)
    return RemainderReport(
        series_value=series,
        integral_value=res.value,
        integral_error_estimate=res.error_estimate,
        discrepancy=abs(series - res.value),
    )


def remainder_identity_check(
    f: ex.Expr,
    params: ParamSet,
    n: int,
    a: float,
    b: float,
    t: float,
    cfg: QuadratureConfig | None = None,
) -> IdentityReport:
    """Compare both sides of the remainder identity on ``[a, b]``.

    lhs = int_a^b V^{n+1}f(s)/(n+1)! * u(t; s)**(n+1) d_omega s
    rhs = int_a^t R_{n,f}(a, s) d_omega s + int_t^b R_{n,f}(b, s) d_omega s

    ``t = a`` and ``t = b`` give the two endpoint corollaries.
    """
    if n < -1:
        raise ValueError(f"remainder order must be >= -1, got {n}")
    if not (a <= t <= b):
        raise ValueError(f"t={t} must lie in [{a}, {b}]")
    chain = derivative_chain(f, params, n + 1)
    top = chain[-1]
    fact = math.factorial(n + 1)

    def lhs_integrand(x):
        return ex.evaluate(top, x) / fact * np.power(measure_coordinate(params, t, x), n + 1)

    lhs = vintegral(lhs_integrand, params, a, b, cfg)

    def remainder_about(center: float) -> Callable:
        if n == -1:
            return lambda x: ex.evaluate(f, x)
        scaled = _scaled([float(ex.evaluate(d, center)) for d in chain[:-1]])

        def r(x):
            u = measure_coordinate(params, x, center)
            return ex.evaluate(f, x) - kernels.horner(scaled, np.atleast_1d(u)).reshape(np.shape(x))

        return r

    left = vintegral(remainder_about(a), params, a, t, cfg)
    right = vintegral(remainder_about(b), params, t, b, cfg)
    rhs = left.value + right.value
    return IdentityReport(
        name="remainder_identity",
        lhs=lhs.value,
        rhs=rhs,
        difference=abs(lhs.value - rhs),
        error_estimate=lhs.error_estimate + left.error_estimate + right.error_estimate,
        context={"n": n, "a": a, "b": b, "t": t, "function": ex.to_source(f)},
    )
