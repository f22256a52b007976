"""The truncated V-fractional derivative and the V-fractional integral.

For a differentiable ``f`` the derivative equals
``lam * t**(1 - alpha) * f'(t)``; that closed form is the primary path and
the limit definition is kept as an independent numerical check. The
integral ``mu * int_a^b f(x) x**(alpha - 1) dx`` is evaluated after the
substitution ``u = x**alpha``, which removes the endpoint singularity.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import expr as ex
from .corekernel import ParamSet, derive_constants, h_truncated
from .errors import DomainError, ExpressionBlowup, NonConvergence
from .quadrature import QuadratureConfig, QuadratureResult, integrate, vectorize

MAX_NODES = 100_000

# geometric step sequence for the limit definition
LIMIT_EPS0 = 1e-2
LIMIT_STEPS = 21
LIMIT_TOL = 1e-4


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"the derivative is only evaluated for t > 0, got {t}")
    return t


def vderiv_limit(f: Callable[[float], float], params: ParamSet, t: float) -> float:
    """Evaluate the defining limit ``[f(t H(eps t^-alpha)) - f(t)] / eps``.

    Difference quotients at ``eps_k = 1e-2 * 2**-k`` (``k = 0..20``); a
    Richardson table on the last four quotients gives the value. Raises
    :class:`NonConvergence` when the two highest-order extrapolants differ
    by more than ``1e-4`` relative.
    """
    t = _check_t(t)
    g = vectorize(f)
    scale = t ** (-params.alpha)
    eps = LIMIT_EPS0 * 0.5 ** np.arange(LIMIT_STEPS)
    points = np.array([t] + [t * h_truncated(params, e * scale) for e in eps])
    values = g(points)
    f_t = float(values[0])
    quotients = (values[1:] - f_t) / eps

    # Richardson on the tail: the error expands in integer powers of eps
    # and each step halves eps.
    row = list(quotients[-4:])
    table = [row]
    for order in range(1, 4):
        factor = 2.0**order
        prev = table[-1]
        table.append([(factor * prev[j + 1] - prev[j]) / (factor - 1.0) for j in range(len(prev) - 1)])
    best = table[-1][0]
    runner_up = table[-2][-1]
    # rounding in f(t) is amplified by 1/eps_min and again by the table
    noise = 100.0 * np.finfo(float).eps * abs(f_t) / eps[-1]
    size = max(abs(best), abs(runner_up))
    if abs(best - runner_up) > LIMIT_TOL * size + noise:
        raise NonConvergence(
            f"limit extrapolants disagree at t={t}: {best!r} vs {runner_up!r}"
        )
    return float(best)


def vderiv_closed(f: ex.Expr, params: ParamSet, t: float | np.ndarray) -> float | np.ndarray:
    """``lam * t**(1 - alpha) * f'(t)``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0.0):
        raise DomainError("the derivative is only evaluated for t > 0")
    lam = derive_constants(params).lam
    value = lam * np.power(t_arr, 1.0 - params.alpha) * ex.evaluate(ex.diff(f), t_arr)
    return float(value) if np.ndim(t) == 0 else value


def vderiv_expr(f: ex.Expr, params: ParamSet) -> ex.Expr:
    """Symbolic ``lam * t^(1-alpha) * f'``, simplified."""
    lam = derive_constants(params).lam
    df = ex.diff(f)
    weight = ex.Pow(ex.T, 1.0 - params.alpha)
    return ex.simplify(ex.Mul(ex.Mul(ex.Const(lam), weight), df))


def vderiv_n_expr(f: ex.Expr, params: ParamSet, n: int, *, max_nodes: int = MAX_NODES) -> ex.Expr:
    """``n``-fold application of :func:`vderiv_expr`; ``n = 0`` returns ``f``.

    Raises :class:`ExpressionBlowup` once an intermediate tree exceeds
    ``max_nodes`` nodes.
    """
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    e = f
    for k in range(n):
        e = vderiv_expr(e, params)
        size = ex.node_count(e)
        if size > max_nodes:
            raise ExpressionBlowup(
                f"derivative of order {k + 1} has {size} nodes (limit {max_nodes})"
            )
    return e


def vintegral(
    f: Callable,
    params: ParamSet,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    raise_on_failure: bool = True,
) -> QuadratureResult:
    """``mu * int_a^b f(x) x**(alpha-1) dx`` by adaptive Gauss-Kronrod.

    ``f`` may be an :class:`~vfrac.expr.Expr` or any callable; array-aware
    callables are evaluated panel-wise. ``b < a`` is accepted and yields
    the oriented integral.
    """
    a = float(a)
    b = float(b)
    if min(a, b) < 0.0:
        raise DomainError("the V-fractional integral needs a >= 0 and b >= 0")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    mu = derive_constants(params).mu
    alpha = params.alpha
    g = vectorize(f)
    if alpha == 1.0:
        res = integrate(g, a, b, cfg, raise_on_failure=raise_on_failure)
        return QuadratureResult(mu * res.value, mu * res.error_estimate, res.evaluations)
    inv_alpha = 1.0 / alpha

    def integrand(u: np.ndarray) -> np.ndarray:
        return g(np.power(u, inv_alpha))

    ua = a**alpha
    ub = b**alpha
    scale = mu / alpha
    res = integrate(
        integrand,
        ua,
        ub,
        _scaled(cfg, scale),
        raise_on_failure=raise_on_failure,
    )
    return QuadratureResult(scale * res.value, scale * res.error_estimate, res.evaluations)


def _scaled(cfg: QuadratureConfig | None, scale: float) -> QuadratureConfig:
    # the u-integral is multiplied by ``scale`` afterwards
    cfg = cfg or QuadratureConfig()
    return QuadratureConfig(
        abs_tol=cfg.abs_tol / scale,
        rel_tol=cfg.rel_tol,
        max_subdivisions=cfg.max_subdivisions,
    )


def measure_coordinate(params: ParamSet, t, s) -> float | np.ndarray:
    """``mu * (t**alpha - s**alpha) / alpha``: the d_omega-length from s to t."""
    mu = derive_constants(params).mu
    alpha = params.alpha
    return mu * (np.power(t, alpha) - np.power(s, alpha)) / alpha


__all__ = [
    "vderiv_limit",
    "vderiv_closed",
    "vderiv_expr",
    "vderiv_n_expr",
    "vintegral",
    "measure_coordinate",
    "QuadratureConfig",
    "QuadratureResult",
]
