"""Parameter validation and the special-function kernel.

Everything here is a pure function of its arguments. The six structural
parameters are restricted to positive reals.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Sequence

from . import kernels
from .errors import (
    ConditionViolated,
    DomainError,
    NonPositiveParameter,
    OrderOutOfRange,
    Overflow,
    TruncationTooSmall,
)

# Largest x with finite Gamma(x) in double precision.
GAMMA_MAX_ARG = 171.62437695630272

FIELDS = ("gamma", "beta", "rho", "delta", "p", "q", "alpha", "trunc_i")


@dataclass(frozen=True)
class ParamSet:
    """Validated parameters of the truncated V-fractional operators.

    Build instances through :func:`validate_params` (or :meth:`make`), which
    enforces positivity, ``gamma + p >= q``, ``0 < alpha <= 1`` and
    ``trunc_i >= 1``.
    """

    gamma: float
    beta: float
    rho: float
    delta: float
    p: float
    q: float
    alpha: float
    trunc_i: int

    @classmethod
    def make(
        cls,
        gamma: float = 1.0,
        beta: float = 1.0,
        rho: float = 1.0,
        delta: float = 1.0,
        p: float = 1.0,
        q: float = 1.0,
        alpha: float = 1.0,
        trunc_i: int = 1,
    ) -> "ParamSet":
        return validate_params((gamma, beta, rho, delta, p, q, alpha, trunc_i))

    def replace(self, **changes: Any) -> "ParamSet":
        data = asdict(self)
        data.update(changes)
        return validate_params(data)

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Constants:
    """Derivative prefactor ``lam`` and its reciprocal ``mu``.

    ``lam`` multiplies ``t**(1-alpha) * f'(t)`` in the derivative; ``mu``
    is the density of the weighted measure and scales the Taylor monomials.
    """

    lam: float
    mu: float


def validate_params(raw: Sequence[Any] | dict[str, Any]) -> ParamSet:
    """Check a raw ``(gamma, beta, rho, delta, p, q, alpha, trunc_i)`` tuple.

    A mapping with those keys is accepted too. Raises the error class of the
    first violated condition, checked in field order.
    """
    if isinstance(raw, dict):
        missing = [k for k in FIELDS if k not in raw]
        if missing:
            raise TypeError(f"missing parameter(s): {', '.join(missing)}")
        values = [raw[k] for k in FIELDS]
    else:
        values = list(raw)
        if len(values) != len(FIELDS):
            raise TypeError(f"expected {len(FIELDS)} parameters, got {len(values)}")

    *structural, alpha, trunc_i = values
    structural = [float(v) for v in structural]
    for name, value in zip(FIELDS[:6], structural):
        if not (math.isfinite(value) and value > 0.0):
            raise NonPositiveParameter(f"{name} must be a finite positive real, got {value!r}")
    gamma, beta, rho, delta, p, q = structural
    if gamma + p < q:
        raise ConditionViolated(f"gamma + p >= q violated: {gamma} + {p} < {q}")

    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise OrderOutOfRange(f"alpha must lie in (0, 1], got {alpha!r}")

    if isinstance(trunc_i, float):
        if not trunc_i.is_integer():
            raise TruncationTooSmall(f"trunc_i must be an integer, got {trunc_i!r}")
        trunc_i = int(trunc_i)
    trunc_i = int(trunc_i)
    if trunc_i < 1:
        raise TruncationTooSmall(f"trunc_i must be >= 1, got {trunc_i}")

    return ParamSet(gamma, beta, rho, delta, p, q, alpha, trunc_i)


def gamma_fn(x: float) -> float:
    """Gamma function on the positive reals."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x >= GAMMA_MAX_ARG:
        raise Overflow(f"Gamma({x}) exceeds the double range")
    return math.gamma(x)


def _lgamma_pos(x: float) -> float:
    if not x > 0.0:
        raise DomainError(f"log-gamma requires a positive argument, got {x!r}")
    return math.lgamma(x)


def pochhammer_gen(rho: float, q: float, k: int) -> float:
    """Generalized Pochhammer symbol ``Gamma(rho + q*k) / Gamma(rho)``."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return 1.0
    top = rho + q * k
    if top < GAMMA_MAX_ARG and rho < GAMMA_MAX_ARG and rho > 1e-300:
        # direct ratio is more accurate while both factors are representable
        num = math.gamma(top)
        den = math.gamma(rho)
        if math.isfinite(num) and den != 0.0:
            return num / den
    log_ratio = _lgamma_pos(top) - _lgamma_pos(rho)
    if log_ratio > kernels.LOG_MAX:
        raise Overflow(f"pochhammer_gen({rho}, {q}, {k}) exceeds the double range")
    return math.exp(log_ratio)


def ml_truncated(params: ParamSet, z: float) -> float:
    """Six-parameter Mittag-Leffler series truncated after ``trunc_i`` terms."""
    value, overflowed = kernels.ml_sum(
        params.gamma,
        params.beta,
        params.rho,
        params.delta,
        params.p,
        params.q,
        float(z),
        int(params.trunc_i),
    )
    if overflowed or not math.isfinite(value):
        raise Overflow(f"truncated Mittag-Leffler series overflows at z={z}")
    return value


def h_truncated(params: ParamSet, z: float) -> float:
    """``Gamma(beta)`` times the truncated Mittag-Leffler function."""
    if params.beta >= GAMMA_MAX_ARG:
        raise Overflow(f"Gamma(beta) overflows for beta={params.beta}")
    return gamma_fn(params.beta) * ml_truncated(params, z)


def derive_constants(params: ParamSet) -> Constants:
    """Return ``(lam, mu)``; each is its own log-gamma combination.

    lam = Gamma(beta) (rho)_q / (Gamma(gamma+beta) (delta)_p)
    """
    g, b = params.gamma, params.beta
    log_lam = (
        math.lgamma(b)
        + (math.lgamma(params.rho + params.q) - math.lgamma(params.rho))
        - math.lgamma(g + b)
        - (math.lgamma(params.delta + params.p) - math.lgamma(params.delta))
    )
    if abs(log_lam) > kernels.LOG_MAX:
        raise Overflow("derivative constant outside the double range")
    lam = (
        gamma_ratio(b, g + b) * pochhammer_gen(params.rho, params.q, 1)
        / pochhammer_gen(params.delta, params.p, 1)
    )
    mu = (
        gamma_ratio(g + b, b) * pochhammer_gen(params.delta, params.p, 1)
        / pochhammer_gen(params.rho, params.q, 1)
    )
    if not (math.isfinite(lam) and math.isfinite(mu)) or lam <= 0.0 or mu <= 0.0:
        lam = math.exp(log_lam)
        mu = math.exp(-log_lam)
    return Constants(lam=lam, mu=mu)


def gamma_ratio(x: float, y: float) -> float:
    """``Gamma(x) / Gamma(y)`` for positive ``x`` and ``y``."""
    if x < GAMMA_MAX_ARG and y < GAMMA_MAX_ARG:
        return math.gamma(x) / math.gamma(y)
    return math.exp(_lgamma_pos(x) - _lgamma_pos(y))
