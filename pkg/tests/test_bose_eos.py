"""MODULE TO TEST THE BOSE GAS EQUATION OF STATE"""
# pylint: disable=wrong-import-position, import-error, invalid-name
import math
import os
import sys
import mpmath
import numpy as np
import pytest

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.append(os.path.dirname(SCRIPT_DIR))

from tests.base_tests import BaseTest
from api_utilities.exceptions import InvalidFugacity
from bose_eos import (
    EosTable,
    F0,
    F2,
    bosonian_moment,
    c_tilde_from_beta0,
    entropy_from_quadrature,
    entropy_S,
    entropy_S_prime,
    log_moment,
    polylog,
    series_coefficients,
)


class TestPolylog(BaseTest):
    """Class to Test the polylogarithm series"""

    def test_closed_forms(self):
        """Li_1(x) = -log(1 - x) and Li_s(x) ~ x for small x"""
        assert polylog(1.0, 0.5) == pytest.approx(math.log(2.0), rel=1e-13)
        assert polylog(2.0, 1e-12) == pytest.approx(1e-12, rel=1e-10)

    @pytest.mark.parametrize("s", [0.5, 1.5, 2.5, 3.0])
    @pytest.mark.parametrize("beta", [0.1, 0.5, 0.9, 0.999])
    def test_against_mpmath(self, s, beta):
        """Series agrees with mpmath's polylog within tol / (1 - beta)"""
        tolerance = max(1e-12, 10.0 * 1e-14 / (1.0 - beta))
        assert polylog(s, beta) == pytest.approx(float(mpmath.polylog(s, beta)), rel=tolerance)

    def test_quadrature_oracle(self):
        """Li_{3/2}(1/2) from the three dimensional bosonian density"""
        expected = bosonian_moment(0, 0.5) / (2.0 * math.pi) ** 1.5
        assert polylog(1.5, 0.5) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("beta", [0.0, 1.0, -0.2, 1.5])
    def test_invalid_fugacity(self, beta):
        """Fugacity must lie strictly inside (0, 1)"""
        with pytest.raises(InvalidFugacity):
            polylog(1.5, beta)
        with pytest.raises(ValueError):
            entropy_S(beta)


class TestMoments(BaseTest):
    """Class to Test F0, F2 and the quadrature oracles"""

    def test_small_beta_limit(self):
        """F0 / beta tends to (2 pi)^{N/2}"""
        for N in (1, 2, 3):
            assert F0(1e-10, N) / 1e-10 == pytest.approx((2.0 * math.pi) ** (N / 2.0), rel=1e-8)

    @pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
    def test_closed_form_against_quadrature(self, beta):
        """Series moments agree with radial quadrature"""
        assert F0(beta) == pytest.approx(bosonian_moment(0, beta), rel=1e-8)
        assert F2(beta) == pytest.approx(bosonian_moment(2, beta), rel=1e-8)

    @pytest.mark.parametrize("beta", [0.2, 0.7])
    def test_integration_by_parts_identity(self, beta):
        """F2 = -N int log(1 - beta e^{-|v|^2/2}) dv"""
        assert F2(beta) == pytest.approx(-3.0 * log_moment(beta), rel=1e-8)
        assert F2(beta, 2) == pytest.approx(-2.0 * log_moment(beta, N=2), rel=1e-8)

    def test_temperature_scaling(self):
        """Moments scale as T^{N/2} and T^{N/2+1}"""
        T = 2.5
        assert bosonian_moment(0, 0.4, T) == pytest.approx(T**1.5 * F0(0.4), rel=1e-8)
        assert bosonian_moment(2, 0.4, T) == pytest.approx(T**2.5 * F2(0.4), rel=1e-8)
        ratio = bosonian_moment(0, 1e-6, 2.0) / 1e-6
        assert ratio == pytest.approx((4.0 * math.pi) ** 1.5, rel=1e-5)

    def test_moment_order_validation(self):
        """Only the zeroth and second moments are defined"""
        with pytest.raises(ValueError):
            bosonian_moment(1, 0.5)
        with pytest.raises(ValueError):
            bosonian_moment(0, 0.5, T=0.0)


class TestEntropy(BaseTest):
    """Class to Test the entropy S(beta) and its monotonicity"""

    def test_entropy_ordering(self):
        """S decreases in beta"""
        assert entropy_S(0.2) > entropy_S(0.8)
        assert entropy_S(0.999) < entropy_S(0.9)
        assert math.isfinite(entropy_S(0.999))

    def test_entropy_quadrature(self):
        """S from the series matches -int (M/(1-M) log M + log(1-M)) / rho_n"""
        for beta in (0.3, 0.5, 0.8):
            assert entropy_S(beta) == pytest.approx(entropy_from_quadrature(beta), rel=1e-6)
        assert entropy_S(0.5) == pytest.approx(entropy_from_quadrature(0.5, T=3.0), rel=1e-6)

    def test_entropy_prime_negative_on_grid(self):
        """S' < 0 and S strictly decreasing on a log-spaced grid"""
        grid = np.logspace(-6, np.log10(1.0 - 1e-6), 200)
        values = [entropy_S(beta) for beta in grid]
        assert all(entropy_S_prime(beta) < 0 for beta in grid)
        assert np.all(np.diff(values) < 0)

    @pytest.mark.parametrize("beta", [0.05, 0.5, 0.9])
    def test_entropy_prime_finite_differences(self, beta):
        """S' matches central differences of S"""
        step = 1e-6
        numeric = (entropy_S(beta + step) - entropy_S(beta - step)) / (2.0 * step)
        assert entropy_S_prime(beta) == pytest.approx(numeric, rel=1e-5)

    def test_series_coefficients(self):
        """c_tilde_n >= c_n with equality at n = 0"""
        for N in (2, 3, 4):
            c_n, c_tilde_n = series_coefficients(200, N)
            assert c_n[0] == pytest.approx(1.0)
            assert c_tilde_n[0] == pytest.approx(1.0)
            assert np.all(c_tilde_n >= c_n * (1.0 - 1e-14))


class TestIsentropicConstant(BaseTest):
    """Class to Test c_tilde_N and the EosTable"""

    def test_positive(self):
        """c_tilde_N > 0 for any reference fugacity"""
        for beta0 in (1e-4, 0.3, 0.5, 0.99):
            assert c_tilde_from_beta0(beta0) > 0

    def test_pressure_law(self):
        """p = c_tilde rho_n^{(N+2)/N} along the isentrope"""
        rng = np.random.default_rng(7)
        for _ in range(50):
            beta0 = float(rng.uniform(0.01, 0.99))
            T = float(rng.uniform(0.1, 10.0))
            table = EosTable.from_beta0(beta0)
            rho_n = table.density(T)
            assert table.pressure(T) == pytest.approx(
                table.c_tilde_N * rho_n ** (5.0 / 3.0), rel=1e-10
            )

    def test_quadrature_cross_check(self):
        """c_tilde_3 at beta0 = 0.5 from quadrature moments"""
        expected = bosonian_moment(2, 0.5) / (3.0 * bosonian_moment(0, 0.5) ** (5.0 / 3.0))
        assert c_tilde_from_beta0(0.5) == pytest.approx(expected, rel=1e-8)

    def test_model_params(self):
        """Only the three dimensional closure feeds the two-fluid model"""
        table = EosTable.from_beta0(0.5)
        params = table.to_model_params(alpha=0.5)
        assert params.c_tilde == table.c_tilde_N
        assert params.alpha == 0.5
        with pytest.raises(ValueError):
            EosTable.from_beta0(0.5, N=2).to_model_params(alpha=0.5)
        with pytest.raises(InvalidFugacity):
            EosTable.from_beta0(1.0)
