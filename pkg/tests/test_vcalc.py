import math
import random

import numpy as np
import pytest

from conftest import FROZEN, oracle_params
from treegen import HIGH, LOW, random_tree, substitute
from vfrac import expr as ex
from vfrac.catalog import CATALOG
from vfrac.corekernel import ParamSet, derive_constants
from vfrac.errors import DomainError, ExpressionBlowup, ToleranceNotMet
from vfrac.quadrature import QuadratureConfig
from vfrac.vcalc import (
    measure_coordinate,
    vderiv_closed,
    vderiv_expr,
    vderiv_limit,
    vderiv_n_expr,
    vintegral,
)
from vfrac.verify import random_params

FUNCS = {
    "t^2": "t^2",
    "exp(t)": "exp(t)",
    "sin(t)": "sin(t)",
    "sqrt(t)": "sqrt(t)",
    "ln(t)": "ln(t)",
    "1/(1 + t)": "1/(1 + t)",
    "t*exp(-t/2)": "t*exp(-t/2)",
}


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), 1e-300)


class TestLimit:
    def test_linear(self, unit_half):
        assert vderiv_limit(lambda t: t, unit_half, 4.0) == pytest.approx(2.0, abs=1e-6)

    def test_constant(self):
        p = oracle_params("mixed_a")
        assert vderiv_limit(lambda t: 3.0, p, 1.7) == 0.0

    def test_square_mu_two(self, mu_two_half):
        assert vderiv_limit(lambda t: t * t, mu_two_half, 4.0) == pytest.approx(8.0, abs=1e-4)

    def test_agrees_with_closed_form(self):
        rng = random.Random(2)
        for _ in range(60):
            entry = rng.choice(CATALOG)
            p = random_params(rng)
            t = rng.uniform(0.2, 3.0)
            assert close(vderiv_limit(entry.expr, p, t), vderiv_closed(entry.expr, p, t), 1e-4)

    def test_rejects_non_positive_t(self, unit):
        with pytest.raises(DomainError):
            vderiv_limit(lambda t: t, unit, 0.0)


class TestClosed:
    def test_examples(self, unit, unit_half, mu_two_half):
        assert vderiv_closed(ex.parse("t^3"), unit_half, 1.0) == 3.0
        assert vderiv_closed(ex.parse("exp(t)"), unit, 2.0) == pytest.approx(7.389056098930650, rel=1e-15)
        assert vderiv_closed(ex.parse("t^2"), mu_two_half, 4.0) == pytest.approx(8.0, rel=1e-15)

    @pytest.mark.parametrize("name, fn, t, expected", FROZEN["vderiv"])
    def test_oracle(self, name, fn, t, expected):
        assert vderiv_closed(ex.parse(FUNCS[fn]), oracle_params(name), t) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("name, fn, n, t, expected", FROZEN["vderiv_n"])
    def test_higher_order_oracle(self, name, fn, n, t, expected):
        e = vderiv_n_expr(ex.parse(FUNCS[fn]), oracle_params(name), n)
        # mpmath differentiates numerically in the pulled-back coordinate
        assert ex.evaluate(e, t) == pytest.approx(expected, rel=1e-10)

    def test_array_input(self, unit_half):
        t = np.array([1.0, 4.0])
        np.testing.assert_allclose(vderiv_closed(ex.parse("t^2"), unit_half, t), 2 * t**1.5)


class TestExpr:
    def test_examples(self, unit_half):
        assert ex.to_source(vderiv_expr(ex.parse("t^2"), unit_half)) == "2 * t^1.5"
        assert vderiv_expr(ex.parse("5"), unit_half) == ex.ZERO
        assert vderiv_expr(ex.parse("t^0.5"), unit_half) == ex.Const(0.5)

    def test_n_fold(self, unit_half):
        f = ex.parse("t^2")
        assert ex.to_source(vderiv_n_expr(f, unit_half, 2)) == "3 * t"
        assert vderiv_n_expr(f, unit_half, 0) is f

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_monomial_telescopes(self, k):
        p = oracle_params("mixed_b")
        mu, a = derive_constants(p).mu, p.alpha
        s = 0.7
        u = ex.Mul(ex.Const(mu / a), ex.Sub(ex.Pow(ex.T, a), ex.Const(s**a)))
        f = ex.Div(ex.Pow(u, float(k)), ex.Const(math.factorial(k)))
        top = vderiv_n_expr(f, p, k)
        for t in (0.4, 1.3, 2.2):
            assert ex.evaluate(top, t) == pytest.approx(1.0, rel=1e-12)

    def test_blowup_guard(self):
        f = ex.parse("exp(sin(t)*cos(t))*ln(1+t^2)/(2+sin(t))")
        with pytest.raises(ExpressionBlowup):
            vderiv_n_expr(f, ParamSet.make(alpha=0.37), 12, max_nodes=2000)


class TestRules:
    """Linearity, product, quotient, constant, power and chain rules."""

    trials = 200

    def _case(self, rng):
        return random_params(rng), random_tree(rng, 3), random_tree(rng, 3), rng.uniform(LOW, HIGH)

    def test_linearity(self):
        rng = random.Random(21)
        for _ in range(self.trials):
            p, f, g, t = self._case(rng)
            a, b = rng.uniform(-3, 3), rng.uniform(-3, 3)
            h = ex.Add(ex.Mul(ex.Const(a), f), ex.Mul(ex.Const(b), g))
            expected = a * vderiv_closed(f, p, t) + b * vderiv_closed(g, p, t)
            assert vderiv_closed(h, p, t) == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_product(self):
        rng = random.Random(22)
        for _ in range(self.trials):
            p, f, g, t = self._case(rng)
            fv, gv = ex.evaluate(f, t), ex.evaluate(g, t)
            expected = fv * vderiv_closed(g, p, t) + gv * vderiv_closed(f, p, t)
            assert vderiv_closed(ex.Mul(f, g), p, t) == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_quotient(self):
        rng = random.Random(23)
        for _ in range(self.trials):
            p, f, g, t = self._case(rng)
            g = ex.Add(ex.Const(1.0), ex.Pow(g, 2.0))
            fv, gv = ex.evaluate(f, t), ex.evaluate(g, t)
            expected = (gv * vderiv_closed(f, p, t) - fv * vderiv_closed(g, p, t)) / gv**2
            assert vderiv_closed(ex.Div(f, g), p, t) == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_constant_and_power(self):
        rng = random.Random(24)
        for _ in range(self.trials):
            p, _, _, t = self._case(rng)
            assert vderiv_closed(ex.Const(rng.uniform(-5, 5)), p, t) == 0.0
            a = rng.uniform(-3, 3)
            lam = derive_constants(p).lam
            assert vderiv_closed(ex.Pow(ex.T, a), p, t) == pytest.approx(lam * a * t ** (a - p.alpha), rel=1e-9)

    def test_chain(self):
        rng = random.Random(25)
        for _ in range(self.trials):
            p, f, g, t = self._case(rng)
            # outer function evaluated on 1 + g^2 to stay in its safe range
            inner = ex.Add(ex.Const(1.0), ex.Pow(g, 2.0))
            comp = substitute(f, inner)
            try:
                fprime = ex.evaluate(ex.diff(f), ex.evaluate(inner, t))
                expected = fprime * vderiv_closed(inner, p, t)
                got = vderiv_closed(comp, p, t)
            except DomainError:
                continue
            assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestIntegral:
    def test_examples(self, unit_half):
        assert vintegral(lambda x: 1.0, unit_half, 0.0, 4.0).value == pytest.approx(4.0, rel=1e-12)
        for a in (0.3, 0.5, 0.9):
            p = unit_half.replace(alpha=a)
            res = vintegral(lambda x, a=a: x ** (1 - a), p, 1.0, 3.0)
            assert res.value == pytest.approx(2.0, rel=1e-12)
        assert vintegral(ex.T, unit_half, 2.0, 2.0).value == 0.0

    @pytest.mark.parametrize("name, fn, a, b, expected", FROZEN["vintegral"] + FROZEN["vintegral_origin"])
    def test_oracle(self, name, fn, a, b, expected):
        res = vintegral(ex.parse(FUNCS[fn]), oracle_params(name), a, b)
        assert abs(res.value - expected) <= max(1e-10 * abs(expected), res.error_estimate, 1e-12)

    def test_oriented(self):
        p = oracle_params("mixed_a")
        f = ex.parse("exp(t)")
        assert vintegral(f, p, 2.0, 0.5).value == pytest.approx(-vintegral(f, p, 0.5, 2.0).value, rel=1e-14)

    def test_negative_limits(self, unit):
        with pytest.raises(DomainError):
            vintegral(ex.T, unit, -1.0, 1.0)

    def test_measure_coordinate_is_integral_of_one(self):
        p = oracle_params("mixed_c")
        res = vintegral(lambda x: 1.0, p, 0.4, 2.5)
        assert res.value == pytest.approx(measure_coordinate(p, 2.5, 0.4), rel=1e-12)

    def test_tolerance_not_met_carries_result(self, unit):
        cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=1)
        with pytest.raises(ToleranceNotMet) as info:
            vintegral(lambda x: np.abs(np.sin(40 * x)), unit, 0.0, 3.0, cfg)
        assert info.value.result.evaluations > 0


class TestCalculusTheorems:
    def test_ftc(self):
        rng = random.Random(31)
        for _ in range(60):
            entry = rng.choice(CATALOG)
            p = random_params(rng)
            a, b = sorted(rng.uniform(0.2, 3.0) for _ in range(2))
            res = vintegral(vderiv_expr(entry.expr, p), p, a, b)
            ref = entry.value(b) - entry.value(a)
            assert abs(res.value - ref) <= max(1e-8, res.error_estimate)

    def test_inverse(self):
        rng = random.Random(32)
        for _ in range(30):
            entry = rng.choice(CATALOG)
            p = random_params(rng)
            a, t = 0.3, rng.uniform(0.8, 2.8)

            def F(x):
                return vintegral(entry.expr, p, a, x).value

            # the limit definition itself applied to the antiderivative
            assert close(vderiv_limit(F, p, t), entry.value(t), 1e-4)

    def test_integration_by_parts(self):
        rng = random.Random(33)
        for _ in range(40):
            f, g = rng.choice(CATALOG).expr, rng.choice(CATALOG).expr
            p = random_params(rng)
            a, b = sorted(rng.uniform(0.2, 3.0) for _ in range(2))
            vf, vg = vderiv_expr(f, p), vderiv_expr(g, p)
            left = vintegral(lambda x: ex.evaluate(f, x) * ex.evaluate(vg, x), p, a, b)
            right = vintegral(lambda x: ex.evaluate(g, x) * ex.evaluate(vf, x), p, a, b)
            boundary = ex.evaluate(f, b) * ex.evaluate(g, b) - ex.evaluate(f, a) * ex.evaluate(g, a)
            assert abs(left.value - (boundary - right.value)) <= max(1e-8, left.error_estimate + right.error_estimate)
