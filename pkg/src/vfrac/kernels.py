"""Hot numeric loops, each with a compiled and a pure-numpy implementation.

The public names at the bottom of the module are bound to whichever
backend :mod:`vfrac._accel` selected. Both implementations are always
importable under their explicit names so the benchmark and the tests can
compare them directly.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from ._accel import BACKEND, HAVE_NUMBA, njit

# log(DBL_MAX); a term whose log-magnitude exceeds this overflows.
LOG_MAX = 709.782712893384

# Gauss-Kronrod 7/15 abscissae on [0, 1] (positive half) and weights.
GK15_NODES = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
GK15_KRONROD = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_GAUSS7 = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-point layout: -x_0 .. -x_6, 0, x_6 .. x_0
UNIT_NODES = np.concatenate([-GK15_NODES[:-1], [0.0], GK15_NODES[-2::-1]])
WEIGHTS_K = np.concatenate([GK15_KRONROD[:-1], GK15_KRONROD[-1:], GK15_KRONROD[-2::-1]])
WEIGHTS_G = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (x_1, x_3, x_5) and 0.
for _j, _w in zip((1, 3, 5), _GAUSS7[:3]):
    WEIGHTS_G[_j] = _w
    WEIGHTS_G[14 - _j] = _w
WEIGHTS_G[7] = _GAUSS7[3]


# -- truncated Mittag-Leffler series ------------------------------------------


def _ml_sum_loop(gamma, beta, rho, delta, p, q, z, trunc):
    # Neumaier-compensated sum of terms built in log space.
    # Returns (value, overflowed).
    lg_rho = math.lgamma(rho)
    lg_delta = math.lgamma(delta)
    total = 1.0 / math.gamma(beta) if beta < 171.0 else math.exp(-math.lgamma(beta))
    comp = 0.0
    if z == 0.0:
        return total, False
    log_abs_z = math.log(abs(z))
    negative = z < 0.0
    for k in range(1, trunc + 1):
        log_term = (
            math.lgamma(rho + q * k)
            - lg_rho
            - math.lgamma(delta + p * k)
            + lg_delta
            + k * log_abs_z
            - math.lgamma(gamma * k + beta)
        )
        if log_term > LOG_MAX:
            return math.inf, True
        term = math.exp(log_term)
        if negative and (k % 2 == 1):
            term = -term
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp, False


ml_sum_numba = njit(_ml_sum_loop) if HAVE_NUMBA else None


def ml_sum_numpy(gamma, beta, rho, delta, p, q, z, trunc):
    """Vectorized term construction followed by an exactly rounded sum."""
    first = 1.0 / math.gamma(beta) if beta < 171.0 else math.exp(-math.lgamma(beta))
    if z == 0.0:
        return first, False
    k = np.arange(1, trunc + 1, dtype=float)
    log_terms = (
        gammaln(rho + q * k)
        - gammaln(rho)
        - gammaln(delta + p * k)
        + gammaln(delta)
        + k * math.log(abs(z))
        - gammaln(gamma * k + beta)
    )
    if np.any(log_terms > LOG_MAX):
        return math.inf, True
    terms = np.exp(log_terms)
    if z < 0.0:
        terms[0::2] *= -1.0
    return math.fsum(np.concatenate(([first], terms))), False


# -- Gauss-Kronrod panels -----------------------------------------------------


def _gk_panels_loop(fvals, half_widths, kronrod, out_k, out_err):
    m = fvals.shape[0]
    for i in range(m):
        res_k = 0.0
        res_g = 0.0
        res_abs = 0.0
        for j in range(15):
            res_k += kronrod[j] * fvals[i, j]
            res_abs += kronrod[j] * abs(fvals[i, j])
        mean = 0.5 * res_k
        res_asc = 0.0
        for j in range(15):
            res_asc += kronrod[j] * abs(fvals[i, j] - mean)
        for j in (1, 3, 5, 7, 9, 11, 13):
            res_g += _gauss_weight(j) * fvals[i, j]
        h = abs(half_widths[i])
        res_k *= h
        res_abs *= h
        res_asc *= h
        err = abs((res_k - res_g * h))
        if res_asc != 0.0 and err != 0.0:
            err = res_asc * min(1.0, (200.0 * err / res_asc) ** 1.5)
        floor = 50.0 * 2.220446049250313e-16 * res_abs
        if floor > err:
            err = floor
        out_k[i] = res_k * (1.0 if half_widths[i] >= 0.0 else -1.0)
        out_err[i] = err


def _gauss_weight(j):
    if j == 7:
        return 0.417959183673469387755102040816327
    if j == 1 or j == 13:
        return 0.129484966168869693270611432679082
    if j == 3 or j == 11:
        return 0.279705391489276667901467771423780
    return 0.381830050505118944950369775488975


if HAVE_NUMBA:
    _gauss_weight = njit(_gauss_weight)
    _gk_panels_numba_inner = njit(_gk_panels_loop)

    def gk_panels_numba(fvals, half_widths):
        fvals = np.ascontiguousarray(fvals, dtype=np.float64)
        half_widths = np.ascontiguousarray(half_widths, dtype=np.float64)
        out_k = np.empty(fvals.shape[0])
        out_err = np.empty(fvals.shape[0])
        _gk_panels_numba_inner(fvals, half_widths, WEIGHTS_K, out_k, out_err)
        return out_k, out_err

else:
    gk_panels_numba = None


def gk_panels_numpy(fvals, half_widths):
    """Kronrod estimates and QUADPACK-style error estimates for ``m`` panels.

    ``fvals`` has shape ``(m, 15)`` (integrand at :data:`UNIT_NODES` mapped
    onto each panel); ``half_widths`` are signed half-lengths. Sums run
    column by column in the same order as the compiled loop, so both
    backends agree bit for bit.
    """
    fvals = np.asarray(fvals, dtype=float)
    h = np.asarray(half_widths, dtype=float)
    m = fvals.shape[0]
    res_k = np.zeros(m)
    res_abs = np.zeros(m)
    for j in range(15):
        res_k += WEIGHTS_K[j] * fvals[:, j]
        res_abs += WEIGHTS_K[j] * np.abs(fvals[:, j])
    mean = 0.5 * res_k
    res_asc = np.zeros(m)
    for j in range(15):
        res_asc += WEIGHTS_K[j] * np.abs(fvals[:, j] - mean)
    res_g = np.zeros(m)
    for j in (1, 3, 5, 7, 9, 11, 13):
        res_g += WEIGHTS_G[j] * fvals[:, j]
    ah = np.abs(h)
    res_k *= ah
    res_abs *= ah
    res_asc *= ah
    err = np.abs(res_k - res_g * ah)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = res_asc * np.minimum(1.0, (200.0 * err / res_asc) ** 1.5)
    err = np.where((res_asc != 0.0) & (err != 0.0), scaled, err)
    err = np.maximum(err, 50.0 * np.finfo(float).eps * res_abs)
    return np.where(h >= 0.0, res_k, -res_k), err


# -- Horner evaluation of the Taylor polynomial ---------------------------------


def _horner_loop(scaled_coeffs, u, out):
    n = scaled_coeffs.shape[0]
    for i in range(u.shape[0]):
        acc = 0.0
        for k in range(n - 1, -1, -1):
            acc = acc * u[i] + scaled_coeffs[k]
        out[i] = acc


if HAVE_NUMBA:
    _horner_numba_inner = njit(_horner_loop)

    def horner_numba(scaled_coeffs, u):
        c = np.ascontiguousarray(scaled_coeffs, dtype=np.float64)
        u = np.ascontiguousarray(np.atleast_1d(u), dtype=np.float64)
        out = np.empty(u.shape[0])
        _horner_numba_inner(c, u, out)
        return out

else:
    horner_numba = None


def horner_numpy(scaled_coeffs, u):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    acc = np.zeros_like(u)
    for c in scaled_coeffs[::-1]:
        acc = acc * u + c
    return acc


if HAVE_NUMBA:
    ml_sum = ml_sum_numba
    gk_panels = gk_panels_numba
    horner = horner_numba
else:
    ml_sum = ml_sum_numpy
    gk_panels = gk_panels_numpy
    horner = horner_numpy

__all__ = ["BACKEND", "ml_sum", "gk_panels", "horner", "UNIT_NODES", "WEIGHTS_K"]
