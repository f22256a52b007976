"""Randomized property checks behind ``vfrac verify``.

Every suite draws its cases from a seeded :class:`random.Random`, so a run
is reproducible from ``(suite, trials, seed)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from . import expr as ex
from .bounds import (
    holder_check,
    remainder_product_bound,
    remainder_supnorm_bound,
)
from .catalog import CATALOG, SAFE_INTERVAL
from .corekernel import ParamSet, derive_constants, validate_params
from .errors import VFracError
from .quadrature import QuadratureConfig
from .taylor import remainder_identity_check, remainder_report
from .vcalc import vderiv_closed, vderiv_expr, vderiv_limit, vintegral


@dataclass(frozen=True)
class CheckResult:
    suite: str
    case: str
    residual: float
    tolerance: float
    passed: bool


def random_params(rng: random.Random, alpha_low: float = 0.3, trunc_max: int = 5) -> ParamSet:
    """A valid parameter set with moderate values (``gamma + p >= q``)."""
    while True:
        gamma = rng.uniform(0.5, 3.0)
        p = rng.uniform(0.5, 2.0)
        q = rng.uniform(0.5, 2.0)
        if gamma + p >= q:
            break
    return validate_params(
        (
            gamma,
            rng.uniform(0.5, 3.0),
            rng.uniform(0.5, 3.0),
            rng.uniform(0.5, 3.0),
            p,
            q,
            rng.uniform(alpha_low, 1.0),
            rng.randint(1, trunc_max),
        )
    )


def _interval(rng: random.Random) -> tuple[float, float]:
    lo, hi = SAFE_INTERVAL
    a, b = sorted(rng.uniform(lo, hi) for _ in range(2))
    if b - a < 0.05:
        b = min(hi, a + 0.5)
    return a, b


def _rel(x: float, ref: float) -> float:
    return abs(x - ref) / max(abs(ref), 1e-300)


def _record(suite, case, residual, tolerance) -> CheckResult:
    return CheckResult(suite, case, float(residual), float(tolerance), bool(residual <= tolerance))


def suite_classical(rng, trials, cfg):
    unit = ParamSet.make()
    out = []
    for k in range(trials):
        entry = CATALOG[k % len(CATALOG)]
        a, b = _interval(rng)
        t = rng.uniform(*SAFE_INTERVAL)
        d = vderiv_closed(entry.expr, unit, t)
        out.append(_record("classical", f"d/dt {entry.source} at {t:.6g}", _rel(d, entry.derivative(t)), 1e-10))
        ref = entry.antiderivative(b) - entry.antiderivative(a)
        res = vintegral(entry.expr, unit, a, b, cfg)
        out.append(_record("classical", f"int {entry.source} on [{a:.6g}, {b:.6g}]", _rel(res.value, ref), 1e-10))
    return out


def suite_limit(rng, trials, cfg):
    out = []
    for _ in range(trials):
        entry = rng.choice(CATALOG)
        params = random_params(rng)
        t = rng.uniform(*SAFE_INTERVAL)
        closed = vderiv_closed(entry.expr, params, t)
        limit = vderiv_limit(entry.expr, params, t)
        out.append(_record("limit", f"{entry.source} at {t:.6g}", _rel(limit, closed), 1e-4))
    return out


def suite_ftc(rng, trials, cfg):
    out = []
    for _ in range(trials):
        entry = rng.choice(CATALOG)
        params = random_params(rng)
        a, b = _interval(rng)
        f = entry.expr
        res = vintegral(vderiv_expr(f, params), params, a, b, cfg)
        ref = ex.evaluate(f, b) - ex.evaluate(f, a)
        out.append(_record("ftc", f"{f} on [{a:.6g}, {b:.6g}]", abs(res.value - ref), max(1e-8, res.error_estimate)))
    return out


def central_derivative(F: Callable[[float], float], t: float, h: float = 0.05, levels: int = 5) -> float:
    """Richardson-extrapolated central difference of ``F`` at ``t``."""
    table = []
    for k in range(levels):
        hk = h * 0.5**k
        row = [(F(t + hk) - F(t - hk)) / (2.0 * hk)]
        for j, prev in enumerate(table[-1] if table else []):
            factor = 4.0 ** (j + 1)
            row.append((factor * row[j] - prev) / (factor - 1.0))
        table.append(row)
    return table[-1][-1]


def suite_inverse(rng, trials, cfg):
    """``V int_a^t f d_omega = f(t)``; V applied as ``lam t^(1-alpha) d/dt``."""
    out = []
    for _ in range(trials):
        entry = rng.choice(CATALOG)
        params = random_params(rng)
        a, t = _interval(rng)
        t = max(t, a + 0.2)
        f = entry.expr
        h = min(0.05, 0.25 * (t - a))
        errors = []

        def F(x, f=f, params=params, a=a):
            res = vintegral(f, params, a, x, cfg)
            errors.append(res.error_estimate)
            return res.value

        lam = derive_constants(params).lam
        value = lam * t ** (1.0 - params.alpha) * central_derivative(F, t, h)
        # quadrature error propagates through the difference quotients
        tol = max(1e-8, lam * t ** (1.0 - params.alpha) * max(errors) / h)
        out.append(_record("inverse", f"{f} from {a:.6g} at {t:.6g}", abs(value - ex.evaluate(f, t)), tol))
    return out


def suite_parts(rng, trials, cfg):
    out = []
    for _ in range(trials):
        f = rng.choice(CATALOG).expr
        g = rng.choice(CATALOG).expr
        params = random_params(rng)
        a, b = _interval(rng)
        vf = vderiv_expr(f, params)
        vg = vderiv_expr(g, params)
        left = vintegral(lambda x: ex.evaluate(f, x) * ex.evaluate(vg, x), params, a, b, cfg)
        right = vintegral(lambda x: ex.evaluate(g, x) * ex.evaluate(vf, x), params, a, b, cfg)
        boundary = ex.evaluate(f, b) * ex.evaluate(g, b) - ex.evaluate(f, a) * ex.evaluate(g, a)
        residual = abs(left.value - (boundary - right.value))
        tol = max(1e-8, left.error_estimate + right.error_estimate)
        out.append(_record("parts", f"f={f}, g={g}", residual, tol))
    return out


def suite_remainder(rng, trials, cfg):
    out = []
    for _ in range(trials):
        f = rng.choice(CATALOG).expr
        params = random_params(rng)
        n = rng.randint(0, 4)
        t, s = _interval(rng)
        if rng.random() < 0.5:
            t, s = s, t
        rep = remainder_report(f, params, n, t, s, cfg)
        tol = max(1e-7, 10.0 * rep.integral_error_estimate)
        out.append(_record("remainder", f"{f}, n={n}, center={t:.6g}, point={s:.6g}", rep.discrepancy, tol))
    return out


def suite_identity(rng, trials, cfg):
    out = []
    for k in range(trials):
        f = rng.choice(CATALOG).expr
        params = random_params(rng)
        n = rng.randint(-1, 3)
        a, b = _interval(rng)
        t = (a, b, rng.uniform(a, b))[k % 3]
        rep = remainder_identity_check(f, params, n, a, b, t, cfg)
        out.append(
            _record("identity", f"{f}, n={n}, [{a:.6g}, {b:.6g}], t={t:.6g}", rep.difference, max(1e-7, rep.error_estimate))
        )
    return out


def suite_holder(rng, trials, cfg):
    out = []
    for _ in range(trials):
        f = rng.choice(CATALOG).expr
        g = rng.choice(CATALOG).expr
        params = random_params(rng)
        a, b = _interval(rng)
        r = 2.0 if rng.random() < 0.25 else rng.uniform(1.1, 6.0)
        s = r / (r - 1.0)
        rep = holder_check(f, g, r, s, params, a, b, cfg)
        out.append(_record("holder", f"f={f}, g={g}, r={r:.4g}", max(0.0, -rep.slack), rep.rhs * 1e-9 + 1e-12))
    return out


def make_bounds_suite(corrected: bool) -> Callable:
    def suite(rng, trials, cfg):
        out = []
        for k in range(trials):
            f = rng.choice(CATALOG).expr
            params = random_params(rng)
            n = rng.randint(0, 3)
            x0, t = _interval(rng)
            direction = ("forward", "backward", "absolute")[k % 3]
            if direction == "backward" or (direction == "absolute" and rng.random() < 0.5):
                x0, t = t, x0
            if k % 2 == 0:
                r = 2.0 if rng.random() < 0.3 else rng.uniform(1.1, 6.0)
                rep = remainder_product_bound(
                    f, params, n, r, r / (r - 1.0), x0, t, direction, cfg, corrected=corrected
                )
            else:
                rep = remainder_supnorm_bound(f, params, n, x0, t, direction, cfg, corrected=corrected)
            mu = derive_constants(params).mu
            out.append(
                _record(
                    "bounds",
                    f"{rep.name}: f={f}, n={n}, x0={x0:.6g}, t={t:.6g}, mu={mu:.4g}",
                    max(0.0, -rep.slack),
                    rep.rhs * 1e-9 + 1e-12,
                )
            )
        return out

    return suite


SUITES: dict[str, Callable] = {
    "classical": suite_classical,
    "limit": suite_limit,
    "ftc": suite_ftc,
    "inverse": suite_inverse,
    "parts": suite_parts,
    "remainder": suite_remainder,
    "identity": suite_identity,
    "holder": suite_holder,
    "bounds": make_bounds_suite(corrected=False),
    "bounds-corrected": make_bounds_suite(corrected=True),
}


def run_suite(
    name: str, trials: int, seed: int = 0, cfg: QuadratureConfig | None = None
) -> list[CheckResult]:
    """Run one suite (or ``"all"``); library errors count as failed cases."""
    names = [k for k in SUITES if k != "bounds-corrected"] if name == "all" else [name]
    results: list[CheckResult] = []
    for suite_name in names:
        try:
            suite = SUITES[suite_name]
        except KeyError:
            raise ValueError(f"unknown suite {suite_name!r}") from None
        rng = random.Random(f"{suite_name}:{seed}")
        try:
            results.extend(suite(rng, trials, cfg))
        except VFracError as exc:
            results.append(CheckResult(suite_name, f"error: {exc}", math.inf, 0.0, False))
    return results
