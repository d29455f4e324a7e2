"""MODULE TO TEST JUMP CONDITIONS AND SHOCK CURVE TRACING"""
# pylint: disable=wrong-import-position, import-error, invalid-name, redefined-outer-name
import os
import sys
import numpy as np
import pytest

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.append(os.path.dirname(SCRIPT_DIR))

from tests.base_tests import BaseTest
from api_utilities.exceptions import NonpositiveDensity, SeedJacobianSingular
from entropy_pair import shock_entropy_dissipation
from hyperbolicity import eigenvalues
from rankine_hugoniot import (
    Direction,
    ShockCurve,
    ShockPoint,
    classify_shock,
    dissipation_scaling_exponent,
    jacobian_J,
    jump_map,
    rh_reduced_residual,
    rh_residual,
    trace_both_halves,
    trace_shock_curve,
)
from state_model import ModelParams, PrimitiveState

UNIT = ModelParams(alpha=1.0, c_tilde=1.0)
SHOCK_PARAMS = ModelParams(alpha=1.0, c_tilde=0.6)
SEED = PrimitiveState(1.0, 1.0, 1.0, 0.0)


def boosted(U: PrimitiveState, shift: float) -> PrimitiveState:
    """Same densities, velocities shifted by a constant"""
    return PrimitiveState(U.rho_n, U.rho_s, U.u_n + shift, U.u_s + shift)


class TestResiduals(BaseTest):
    """Class to Test raw and reduced jump relations"""

    def test_trivial_jump(self):
        """Equal states satisfy every relation for every speed"""
        for sigma in (-1.0, 0.0, 0.7):
            assert np.all(rh_residual(SEED, SEED, sigma, UNIT) == 0.0)
            assert np.all(rh_reduced_residual(SEED, SEED, sigma, UNIT) == 0.0)

    def test_mass_relations_are_galilean(self):
        """The first two components only see u - sigma"""
        Uplus = PrimitiveState(1.3, 0.8, 0.4, -0.2)
        shift = 0.37
        base = rh_residual(SEED, Uplus, 0.1, UNIT)[:2]
        moved = rh_residual(boosted(SEED, shift), boosted(Uplus, shift), 0.1 + shift, UNIT)[:2]
        np.testing.assert_allclose(moved, base, atol=1e-14)

    def test_superfluid_at_rest_in_shock_frame(self):
        """No superfluid jump and u_s = sigma zeroes the second component"""
        Uminus = PrimitiveState(1.0, 2.0, 0.5, 0.3)
        Uplus = PrimitiveState(1.4, 2.0, 0.1, 0.3)
        assert rh_residual(Uminus, Uplus, 0.3, UNIT)[1] == 0.0

    def test_reduced_needs_densities(self):
        """Specific volumes are undefined in vacuum"""
        with pytest.raises(NonpositiveDensity):
            rh_reduced_residual(SEED, PrimitiveState(0.0, 1.0, 0.0, 0.0), 0.0, UNIT)

    def test_jacobian_finite_differences(self):
        """Analytic D_U J matches central differences"""
        rng = np.random.default_rng(31)
        step = 1e-6
        for U in self.random_states(20, seed=32):
            sigma = float(rng.uniform(-1.0, 1.0))
            base = U.as_array()
            numeric = np.empty((4, 4))
            for column in range(4):
                shift = np.eye(4)[column] * step
                numeric[:, column] = (
                    jump_map(PrimitiveState.from_array(base + shift), sigma, self.params)
                    - jump_map(PrimitiveState.from_array(base - shift), sigma, self.params)
                ) / (2.0 * step)
            np.testing.assert_allclose(jacobian_J(U, sigma, self.params), numeric, rtol=1e-5, atol=1e-6)

    def test_seed_jacobian_invertible(self):
        """D_U J is invertible at rho_n = rho_s = u_n = 1, u_s = sigma = 0"""
        assert abs(np.linalg.det(jacobian_J(SEED, 0.0, UNIT))) > 0.1


@pytest.fixture(scope="module")
def halves():
    """Both halves from the seed, sigma0 = 0, span 0.2, 50 steps, sigma0 a root of P"""
    return trace_both_halves(SEED, 0.0, 0.2, 50, SHOCK_PARAMS)


class TestShockCurves(BaseTest):
    """Class to Test continuation of Hugoniot loci"""

    def test_seed_speed_is_a_root(self):
        """With c = 1, u_n - u_s = 1 and sigma = u_s the characteristic polynomial vanishes"""
        assert SHOCK_PARAMS.c == pytest.approx(1.0)
        lambdas = eigenvalues(SEED, SHOCK_PARAMS).lambdas
        assert lambdas[1] == pytest.approx(0.0, abs=1e-10)

    def test_base_speed_is_nearest_eigenvalue(self, halves):
        """The seed speed stays on lambda_2"""
        lambdas = eigenvalues(SEED, SHOCK_PARAMS).lambdas
        for curve in halves:
            assert curve.family == 2
            assert curve.base_speed == pytest.approx(lambdas[1])
            assert curve.base_speed == pytest.approx(0.0, abs=1e-10)
            assert curve.sigma0 == 0.0
            assert curve.points[0].U_plus == SEED
            assert curve.points[0].sigma == curve.base_speed

    def test_half_lengths(self, halves):
        """The increasing half runs to the end, the decreasing one stops at a fold"""
        increasing, decreasing = halves
        assert len(increasing.points) == 51
        assert not increasing.truncated
        assert increasing.points[-1].sigma == pytest.approx(0.2, abs=1e-9)

        assert len(decreasing.points) == 21
        assert decreasing.truncated
        assert decreasing.truncation_reason.startswith("fold near sigma=")
        assert decreasing.points[-1].sigma == pytest.approx(-0.08, abs=1e-9)
        fold = float(decreasing.truncation_reason.split("=")[1].split(",")[0])
        assert -0.084 < fold < -0.08 + 1e-12

    def test_points_satisfy_both_forms(self, halves):
        """Every accepted point zeroes the raw and reduced relations"""
        p = SHOCK_PARAMS
        for curve in halves:
            for point in curve.points:
                assert np.max(np.abs(rh_residual(SEED, point.U_plus, point.sigma, p))) <= 1e-9
                assert np.max(np.abs(rh_reduced_residual(SEED, point.U_plus, point.sigma, p))) <= 1e-9
                assert point.residual_norm <= 1e-10 * (1.0 + np.linalg.norm(jump_map(SEED, point.sigma, p)))

    def test_points_leave_the_trivial_branch(self, halves):
        """Nontrivial right states at strictly monotone speeds"""
        for curve in halves:
            sigmas = [point.sigma for point in curve.points]
            steps = np.diff(sigmas) * curve.direction.sign
            assert np.all(steps > 0)
            for point in curve.points[1:]:
                assert np.linalg.norm(point.U_plus.as_array() - SEED.as_array()) > 1e-4

    def test_one_half_is_lax_admissible(self, halves):
        """Near the base speed exactly one half satisfies the Lax inequalities"""
        increasing, decreasing = halves
        admissible = [
            all(classify_shock(point, SEED, SHOCK_PARAMS).lax_ok for point in curve.points[1:6])
            for curve in (increasing, decreasing)
        ]
        rejected = [
            not any(classify_shock(point, SEED, SHOCK_PARAMS).lax_ok for point in curve.points[1:6])
            for curve in (increasing, decreasing)
        ]
        assert sorted(admissible) == [False, True]
        assert admissible == [not flag for flag in rejected]
        good = increasing if admissible[0] else decreasing
        assert classify_shock(good.points[1], SEED, SHOCK_PARAMS).family == good.family

    def test_energy_dissipation_vanishes_on_locus(self, halves):
        """E and G are the energy and its flux, so D is the energy jump relation"""
        for curve in halves:
            for point in curve.points:
                assert abs(point.dissipation) <= 1e-9
                assert classify_shock(point, SEED, SHOCK_PARAMS).dissipation_ok

    def test_trivial_point_classification(self):
        """U+ = U- at an eigenvalue belongs to that family"""
        lambdas = eigenvalues(SEED, UNIT).lambdas
        result = classify_shock(ShockPoint(lambdas[2], SEED, 0.0, 0.0), SEED, UNIT)
        assert result.family == 3
        assert result.lax_ok and result.dissipation_ok

    def test_galilean_covariance(self):
        """Tracing from a boosted state gives the boosted curve"""
        shift = 0.3
        plain = trace_shock_curve(SEED, 0.0, 0.05, 10, SHOCK_PARAMS, Direction.DECREASING)
        moved = trace_shock_curve(boosted(SEED, shift), shift, 0.05, 10, SHOCK_PARAMS, Direction.DECREASING)
        assert len(plain.points) == len(moved.points) == 11
        for first, second in zip(plain.points, moved.points):
            assert second.sigma == pytest.approx(first.sigma + shift, abs=1e-9)
            np.testing.assert_allclose(
                second.U_plus.as_array(), boosted(first.U_plus, shift).as_array(), atol=1e-9
            )

    def test_zero_kick_follows_trivial_branch(self):
        """Without a kick the continuation stays at U+ = U-"""
        curve = trace_shock_curve(SEED, 0.0, 0.1, 5, UNIT, kick=0.0)
        assert curve.family is None
        assert curve.base_speed == 0.0
        assert curve.seed_condition < 1e14
        for point in curve.points:
            np.testing.assert_allclose(point.U_plus.as_array(), SEED.as_array(), atol=1e-12)

    def test_singular_seed(self):
        """u_n = u_s = sigma0 makes D_U J singular"""
        with pytest.raises(SeedJacobianSingular) as error:
            trace_shock_curve(PrimitiveState(1.0, 1.0, 0.0, 0.0), 0.0, 0.1, 5, UNIT, kick=0.0)
        assert error.value.condition > 1e14

    def test_invalid_steps(self):
        """At least one continuation step"""
        with pytest.raises(ValueError):
            trace_shock_curve(SEED, 0.0, 0.1, 0, UNIT)


class TestDissipationExponent(BaseTest):
    """Class to Test the log-log fit of dissipation against jump size"""

    def test_cubic_law(self):
        """Dissipations growing like the cube of the jump give exponent 3"""
        direction = np.array([0.3, -0.2, 0.5, 0.1])
        curve = ShockCurve(SEED, 0.0, Direction.INCREASING, base_speed=0.0)
        curve.points.append(ShockPoint(0.0, SEED, 0.0, 0.0))
        for amplitude in np.geomspace(1e-3, 1e-1, 10):
            U_plus = PrimitiveState.from_array(SEED.as_array() + amplitude * direction)
            curve.points.append(ShockPoint(0.0, U_plus, 0.0, 0.7 * amplitude**3))
        assert dissipation_scaling_exponent(curve) == pytest.approx(3.0, abs=1e-9)

    def test_off_locus_jumps(self):
        """Away from the Hugoniot locus D is the energy residual and grows linearly"""
        direction = np.array([0.3, -0.2, 0.5, 0.1])
        curve = ShockCurve(SEED, 0.0, Direction.INCREASING, base_speed=0.0)
        curve.points.append(ShockPoint(0.0, SEED, 0.0, 0.0))
        for amplitude in np.geomspace(1e-6, 1e-4, 10):
            U_plus = PrimitiveState.from_array(SEED.as_array() + amplitude * direction)
            dissipation = shock_entropy_dissipation(SEED, U_plus, 0.0, UNIT)
            curve.points.append(ShockPoint(0.0, U_plus, 0.0, dissipation))
        assert dissipation_scaling_exponent(curve) == pytest.approx(1.0, abs=0.01)

    def test_needs_points(self):
        """A lone trivial point cannot be fitted"""
        curve = ShockCurve(SEED, 0.0, Direction.INCREASING, base_speed=0.0)
        curve.points.append(ShockPoint(0.0, SEED, 0.0, 0.0))
        with pytest.raises(ValueError):
            dissipation_scaling_exponent(curve)
