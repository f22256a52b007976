"""Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval."""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError, ToleranceNotMet

DEFAULT_TOL = 1e-10


def _default_tol() -> float:
    raw = os.environ.get("VFRAC_QUAD_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"VFRAC_QUAD_TOL must be a positive number, got {raw!r}") from None
    if not value > 0.0:
        raise ValueError(f"VFRAC_QUAD_TOL must be a positive number, got {raw!r}")
    return value


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = DEFAULT_TOL
    rel_tol: float = DEFAULT_TOL
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "QuadratureConfig":
        """Defaults with ``VFRAC_QUAD_TOL`` applied to both tolerances."""
        tol = _default_tol()
        kwargs = {"abs_tol": tol, "rel_tol": tol}
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def vectorize(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap ``f`` so it maps a 1-d array to an array of the same shape.

    Array-aware callables are used as is; scalar-only ones are looped.
    """
    state = {"vectorized": None}

    def call(x: np.ndarray) -> np.ndarray:
        if state["vectorized"] is not False:
            try:
                y = np.asarray(f(x), dtype=float)
            except DomainError:
                raise
            except Exception:
                if state["vectorized"]:
                    raise
                y = None
            if y is not None and y.shape == x.shape:
                state["vectorized"] = True
                return y
            if y is not None and y.ndim == 0:
                # constant callables such as ``lambda x: 1.0``
                state["vectorized"] = True
                return np.full(x.shape, float(y))
            state["vectorized"] = False
        return np.array([float(f(float(xi))) for xi in x])

    return call


def integrate(
    f: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    raise_on_failure: bool = True,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` (oriented: ``b < a`` flips the sign).

    Bisects the panel with the largest error estimate until the summed
    estimate drops below ``max(abs_tol, rel_tol * |value|)``.
    """
    cfg = cfg or QuadratureConfig()
    a = float(a)
    b = float(b)
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integration limits must be finite")
    g = vectorize(f)

    def panels(lefts: np.ndarray, rights: np.ndarray):
        centers = 0.5 * (lefts + rights)
        halves = 0.5 * (rights - lefts)
        x = centers[:, None] + halves[:, None] * kernels.UNIT_NODES[None, :]
        fx = g(x.ravel()).reshape(x.shape)
        if not np.all(np.isfinite(fx)):
            raise DomainError("integrand is not finite inside the interval")
        return kernels.gk_panels(fx, halves)

    val, err = panels(np.array([a]), np.array([b]))
    evaluations = 15
    # heap of (-error, left, right, value, error)
    heap = [(-err[0], a, b, val[0], err[0])]
    total = float(val[0])
    total_err = float(err[0])
    splits = 0
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        if splits >= cfg.max_subdivisions:
            result = QuadratureResult(_resum(heap), _err_sum(heap), evaluations)
            if raise_on_failure:
                raise ToleranceNotMet(
                    f"quadrature on [{a}, {b}] stopped after {splits} subdivisions "
                    f"with error estimate {total_err:.3e}",
                    result,
                )
            return result
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            # panel cannot be split further in floating point
            heapq.heappush(heap, (0.0, lo, hi, v, e))
            splits = cfg.max_subdivisions
            continue
        vals, errs = panels(np.array([lo, mid]), np.array([mid, hi]))
        evaluations += 30
        splits += 1
        heapq.heappush(heap, (-errs[0], lo, mid, vals[0], errs[0]))
        heapq.heappush(heap, (-errs[1], mid, hi, vals[1], errs[1]))
        total += vals[0] + vals[1] - v
        total_err += errs[0] + errs[1] - e
        if splits % 64 == 0:
            total = _resum(heap)
            total_err = _err_sum(heap)
    return QuadratureResult(_resum(heap), _err_sum(heap), evaluations)


def _resum(heap) -> float:
    return math.fsum(float(item[3]) for item in heap)


def _err_sum(heap) -> float:
    return math.fsum(float(item[4]) for item in heap)
