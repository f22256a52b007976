import math
import random

import numpy as np
import pytest

from conftest import FROZEN, oracle_params
from vfrac import expr as ex
from vfrac.bounds import (
    Direction,
    InequalityReport,
    holder_check,
    remainder_product_bound,
    remainder_supnorm_bound,
    sup_norm,
    verdict,
)
from vfrac.catalog import CATALOG
from vfrac.corekernel import ParamSet, derive_constants
from vfrac.errors import ConjugateExponentError, DirectionMismatch
from vfrac.verify import random_params


def witness(params, x0):
    mu, a = derive_constants(params).mu, params.alpha
    return ex.Mul(ex.Const(mu / a), ex.Sub(ex.Pow(ex.T, a), ex.Const(x0**a)))


class TestVerdict:
    def test_slack(self):
        assert verdict(1.0, 1.0)
        assert verdict(1.0 + 5e-10, 1.0)
        assert not verdict(1.0 + 1e-8, 1.0)
        assert verdict(1e-13, 0.0)

    def test_report_build(self):
        rep = InequalityReport.build("x", 1.0, 2.0, {})
        assert rep.holds and rep.slack == 1.0
        assert rep.as_dict()["name"] == "x"


class TestHolder:
    def test_equality(self, unit_half):
        rep = holder_check(lambda x: 1.0, lambda x: 1.0, 2, 2, unit_half, 1.0, 4.0)
        assert rep.lhs == pytest.approx(2.0, rel=1e-12) and rep.rhs == pytest.approx(2.0, rel=1e-12)
        assert rep.holds and rep.name == "cauchy_schwarz"

    def test_classical(self, unit):
        rep = holder_check(lambda x: x, lambda x: 1.0, 2, 2, unit, 0.0, 1.0)
        assert rep.lhs == pytest.approx(0.5) and rep.rhs == pytest.approx(1 / math.sqrt(3))

    def test_sin_cos(self):
        p = ParamSet.make(alpha=0.7)
        rep = holder_check(np.sin, np.cos, 3.0, 1.5, p, 0.0, 1.0)
        assert rep.holds and rep.name == "holder"

    def test_conjugate_check(self, unit):
        with pytest.raises(ConjugateExponentError):
            holder_check(np.sin, np.cos, 3.0, 2.0, unit, 0.0, 1.0)
        with pytest.raises(ConjugateExponentError):
            holder_check(np.sin, np.cos, 1.0, math.inf, unit, 0.0, 1.0)

    def test_random(self):
        rng = random.Random(51)
        for _ in range(100):
            f, g = rng.choice(CATALOG).expr, rng.choice(CATALOG).expr
            r = rng.uniform(1.1, 6.0)
            a, b = sorted(rng.uniform(0.2, 3.0) for _ in range(2))
            assert holder_check(f, g, r, r / (r - 1), random_params(rng), a, b).holds


class TestSupNorm:
    def test_examples(self):
        assert sup_norm(np.sin, 0.0, 3.2).value == pytest.approx(1.0, abs=1e-9)
        assert sup_norm(lambda x: -2.5, 0.0, 1.0).value == 2.5
        assert sup_norm(lambda x: x * np.exp(-x), 0.0, 5.0).value == pytest.approx(math.exp(-1), abs=1e-8)


class TestProductBound:
    def test_tight_witness(self, unit_half):
        rep = remainder_product_bound(witness(unit_half, 1.0), unit_half, 0, 2, 2, 1.0, 4.0)
        assert abs(rep.lhs - 2.0) <= 1e-7 and abs(rep.rhs - 2.0) <= 1e-7

    def test_annihilated(self, unit_half):
        rep = remainder_product_bound(ex.parse("3"), unit_half, 1, 2, 2, 1.0, 4.0)
        assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.holds

    @pytest.mark.parametrize("direction, x0, t", [("forward", 1.0, 2.0), ("backward", 2.0, 1.0), ("absolute", 1.0, 2.0)])
    def test_exp_all_directions(self, direction, x0, t):
        p = ParamSet.make(alpha=0.8)
        rep = remainder_product_bound(ex.parse("exp(t)"), p, 1, 2, 2, x0, t, direction)
        assert rep.holds and rep.name == f"remainder_product_{direction}"

    def test_direction_mismatch(self, unit):
        with pytest.raises(DirectionMismatch):
            remainder_product_bound(ex.T, unit, 0, 2, 2, 2.0, 1.0, Direction.FORWARD)
        with pytest.raises(DirectionMismatch):
            remainder_product_bound(ex.T, unit, 0, 2, 2, 1.0, 2.0, "backward")

    @pytest.mark.parametrize("name, fn, n, x0, t, expected", FROZEN["product_lhs"])
    def test_lhs_oracle(self, name, fn, n, x0, t, expected):
        rep = remainder_product_bound(ex.parse(fn), oracle_params(name), n, 2, 2, x0, t)
        assert rep.lhs == pytest.approx(expected, rel=1e-9, abs=1e-13)


class TestSupNormBound:
    def test_tight_witness(self, unit_half):
        rep = remainder_supnorm_bound(witness(unit_half, 1.0), unit_half, 0, 1.0, 4.0)
        assert abs(rep.lhs - 2.0) <= 1e-7 and abs(rep.rhs - 2.0) <= 1e-7

    def test_constant(self, unit_half):
        rep = remainder_supnorm_bound(ex.parse("2"), unit_half, 0, 1.0, 3.0)
        assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.holds

    def test_exp_absolute(self):
        p = ParamSet.make(alpha=0.6)
        assert remainder_supnorm_bound(ex.parse("exp(t)"), p, 2, 0.5, 1.5, "absolute").holds

    def test_norm_interval_must_cover(self, unit):
        with pytest.raises(ValueError):
            remainder_supnorm_bound(ex.parse("exp(t)"), unit, 0, 1.0, 2.0, "forward", b=1.5)


class TestConstantDefect:
    """With mu != 1 the published right-hand sides are off by a power of mu.

    The kernel integral int_x0^t (t^a - s^a)^k d_omega s carries a factor mu
    that the stated constants omit. For mu > 1 the stated bounds fail.
    """

    P = ParamSet.make(gamma=2.0)  # lambda = 1/2, mu = 2, alpha = 1

    def test_published_product_bound_fails_for_mu_two(self):
        rep = remainder_product_bound(ex.parse("exp(t)"), self.P, 0, 2, 2, 1.0, 1.5)
        # lhs = int_1^1.5 (e^s - e) e^s ds, exact
        exact = (math.exp(3) - math.exp(2)) / 2 - math.e * (math.exp(1.5) - math.e)
        assert rep.lhs == pytest.approx(exact, rel=1e-12)
        assert not rep.holds

    def test_published_supnorm_bound_fails_for_mu_two(self):
        rep = remainder_supnorm_bound(ex.parse("exp(t)"), self.P, 0, 1.0, 1.5)
        assert rep.rhs == pytest.approx(0.125 * (0.5 * math.exp(1.5)) ** 2, rel=1e-9)
        assert not rep.holds

    def test_corrected_bounds_hold(self):
        f = ex.parse("exp(t)")
        assert remainder_product_bound(f, self.P, 0, 2, 2, 1.0, 1.5, corrected=True).holds
        assert remainder_supnorm_bound(f, self.P, 0, 1.0, 1.5, corrected=True).holds

    def test_correction_factors(self):
        f = ex.parse("sin(t)")
        p = oracle_params("mixed_b")
        mu = derive_constants(p).mu
        for r in (1.5, 2.0, 4.0):
            s = r / (r - 1)
            base = remainder_product_bound(f, p, 1, r, s, 0.8, 2.0).rhs
            fixed = remainder_product_bound(f, p, 1, r, s, 0.8, 2.0, corrected=True).rhs
            assert fixed == pytest.approx(base * mu ** (2 / r), rel=1e-12)
        base = remainder_supnorm_bound(f, p, 1, 0.8, 2.0).rhs
        fixed = remainder_supnorm_bound(f, p, 1, 0.8, 2.0, corrected=True).rhs
        assert fixed == pytest.approx(base * mu**2, rel=1e-12)

    def test_corrected_witnesses_are_tight_for_any_mu(self):
        p = oracle_params("mixed_a")
        w = witness(p, 1.0)
        span = derive_constants(p).mu * (4.0**p.alpha - 1.0) / p.alpha
        for rep in (
            remainder_product_bound(w, p, 0, 2, 2, 1.0, 4.0, corrected=True),
            remainder_supnorm_bound(w, p, 0, 1.0, 4.0, corrected=True),
        ):
            assert rep.lhs == pytest.approx(span**2 / 2, rel=1e-9)
            assert rep.rhs == pytest.approx(rep.lhs, rel=1e-9)

    def test_random_draws_with_corrected_constants(self):
        rng = random.Random(61)
        for k in range(120):
            f = rng.choice(CATALOG).expr
            p = random_params(rng)
            x0, t = sorted(rng.uniform(0.2, 3.0) for _ in range(2))
            direction = ("forward", "backward", "absolute")[k % 3]
            if direction == "backward":
                x0, t = t, x0
            n = rng.randint(0, 3)
            r = rng.uniform(1.1, 6.0)
            assert remainder_product_bound(f, p, n, r, r / (r - 1), x0, t, direction, corrected=True).holds
            assert remainder_supnorm_bound(f, p, n, x0, t, direction, corrected=True).holds
