import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfrac import kernels
from vfrac._accel import HAVE_NUMBA
from vfrac.quadrature import QuadratureConfig, integrate

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend not active")


def _gk_on(f, a, b):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    fx = f(c + h * kernels.UNIT_NODES)[None, :]
    return fx, np.array([h])


class TestGaussKronrodRule:
    def test_weights(self):
        assert kernels.WEIGHTS_K.sum() == pytest.approx(2.0, abs=1e-15)
        assert kernels.WEIGHTS_G.sum() == pytest.approx(2.0, abs=1e-15)
        np.testing.assert_array_equal(kernels.UNIT_NODES, -kernels.UNIT_NODES[::-1])

    @pytest.mark.parametrize("degree", range(0, 23))
    def test_kronrod_exact_to_degree_22(self, degree):
        fx, h = _gk_on(lambda x: x**degree, 0.0, 1.0)
        value, _ = kernels.gk_panels_numpy(fx, h)
        assert value[0] == pytest.approx(1.0 / (degree + 1), rel=1e-14)

    def test_gauss_part_exact_to_degree_13(self):
        for degree in range(14):
            fx = kernels.UNIT_NODES**degree
            expected = 0.0 if degree % 2 else 2.0 / (degree + 1)
            assert fx @ kernels.WEIGHTS_G == pytest.approx(expected, abs=1e-14)

    def test_error_estimate_tiny_on_low_degree(self):
        fx, h = _gk_on(lambda x: 3 * x**5 - x, 0.0, 2.0)
        value, err = kernels.gk_panels_numpy(fx, h)
        assert value[0] == pytest.approx(30.0, rel=1e-14)
        assert err[0] < 1e-12

    def test_orientation(self):
        fx, h = _gk_on(np.exp, 1.0, 0.0)
        value, err = kernels.gk_panels_numpy(fx, h)
        assert value[0] == pytest.approx(1.0 - math.e, rel=1e-14) and err[0] >= 0.0


class TestAdaptive:
    def test_polynomial_needs_one_panel(self):
        res = integrate(lambda x: x**7 - 2 * x, -1.0, 2.0)
        assert res.value == pytest.approx((2**8 - 1) / 8 - 3, rel=1e-14)
        assert res.evaluations == 15

    def test_endpoint_singularity(self):
        res = integrate(lambda x: 1 / np.sqrt(x), 0.0, 1.0, QuadratureConfig(1e-10, 1e-10, 5000))
        assert res.value == pytest.approx(2.0, abs=1e-9)

    def test_oscillatory(self):
        res = integrate(lambda x: np.sin(50 * x), 0.0, math.pi / 5)
        assert res.value == pytest.approx(0.0, abs=1e-10)

    def test_scalar_callable(self):
        res = integrate(lambda x: math.cos(x), 0.0, 1.0)
        assert res.value == pytest.approx(math.sin(1.0), rel=1e-13)


@needs_numba
class TestBackendAgreement:
    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.1, 5),
        st.floats(0.1, 3), st.floats(0.1, 3), st.floats(-20, 20), st.integers(1, 40),
    )
    def test_ml_sum(self, gamma, beta, rho, delta, p, q, z, trunc):
        a = kernels.ml_sum_numba(gamma, beta, rho, delta, p, q, z, trunc)
        b = kernels.ml_sum_numpy(gamma, beta, rho, delta, p, q, z, trunc)
        assert a[1] == b[1]
        if not a[1]:
            scale = kernels.ml_sum_numpy(gamma, beta, rho, delta, p, q, abs(z), trunc)[0]
            assert abs(a[0] - b[0]) <= 1e-13 * max(abs(scale), 1e-300)

    def test_gk_panels(self):
        rng = np.random.default_rng(0)
        fx = rng.normal(size=(50, 15))
        h = rng.uniform(-2, 2, size=50)
        va, ea = kernels.gk_panels_numba(fx, h)
        vb, eb = kernels.gk_panels_numpy(fx, h)
        # same summation order, so the backends agree exactly
        np.testing.assert_array_equal(va, vb)
        np.testing.assert_array_equal(ea, eb)

    def test_horner(self):
        rng = np.random.default_rng(1)
        c = rng.normal(size=8)
        u = rng.uniform(-3, 3, size=100)
        np.testing.assert_allclose(kernels.horner_numba(c, u), kernels.horner_numpy(c, u), rtol=1e-13, atol=1e-13)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, VFRAC_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import vfrac, vfrac.kernels as k; print(vfrac.BACKEND, k.ml_sum is k.ml_sum_numpy)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.split() == ["numpy", "True"]
