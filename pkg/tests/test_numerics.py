"""
Tests for quadrature, finite differences, Rayleigh quotients and the shooting oracle.
Run with: pytest tests/test_numerics.py -v
"""

import math
from unittest.mock import patch

import numpy as np
import pytest

from app.errors import ConvergenceError, DomainError, QuadratureSpecError
from app.geometry import CurvatureSpace, GeodesicBall
from app.numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    RadialShooter,
    composite_nodes,
    count_sign_changes,
    first_derivative,
    gauss_legendre,
    integrate_weighted,
    momentum_stddev,
    radial_laplacian_expectation,
    random_trial_function,
    rayleigh_quotient,
    regular_series_start,
    second_derivative,
    solve_eigenvalue_numeric,
    variational_ratio,
)
from app.spectra import RadialFunction, eigenfunction, eigenvalue


class TestQuadratureSpec:
    """Test cases for QuadratureSpec validation"""

    def test_default_layout(self):
        """Test the default rule is 64 nodes in 8 panels"""
        assert DEFAULT_QUADRATURE.node_count == 64
        assert DEFAULT_QUADRATURE.panels == 8
        assert DEFAULT_QUADRATURE.order == 16

    @pytest.mark.parametrize(
        "node_count, nodes_per_panel",
        [(8, 8), (64, 7), (64, 0), (True, 8), (64.0, 8)],
    )
    def test_invalid_layout(self, node_count, nodes_per_panel):
        """Test node counts that do not split into panels are rejected"""
        with pytest.raises(QuadratureSpecError):
            QuadratureSpec(node_count, nodes_per_panel)

    def test_unknown_scheme(self):
        """Test only Gauss-Legendre is accepted"""
        with pytest.raises(QuadratureSpecError):
            QuadratureSpec(scheme="trapezoid")

    def test_spec_error_is_domain_error(self):
        """Test QuadratureSpecError is caught as a DomainError"""
        assert issubclass(QuadratureSpecError, DomainError)


class TestGaussLegendre:
    """Test cases for composite Gauss-Legendre integration"""

    def test_nodes_cover_interval(self):
        """Test composite nodes lie inside the interval and weights sum to its length"""
        nodes, weights = composite_nodes(1.0, 3.0)

        assert nodes.size == 64
        assert np.all((nodes > 1.0) & (nodes < 3.0))
        assert weights.sum() == pytest.approx(2.0, rel=1e-15)

    def test_exact_for_panel_degree(self):
        """Test exactness for degree 2*nodes_per_panel - 1"""
        assert gauss_legendre(lambda x: x**15, 0.0, 2.0) == pytest.approx(2.0**16 / 16, rel=1e-13)

    def test_weighted_flat_ball(self):
        """Test the weighted integral of 1 over the flat ball is r0^3 / 3"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)

        assert integrate_weighted(lambda r: np.ones_like(r), ball) == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_convergence_order(self):
        """Test the error falls by 2^order when the panel count doubles"""
        ball = GeodesicBall(CurvatureSpace(-1.0), 2.0)
        exact = (math.sinh(4.0) / 2.0 - 2.0) / 2.0
        one = lambda r: np.ones_like(r)

        coarse = abs(integrate_weighted(one, ball, QuadratureSpec(16, 2)) - exact)
        fine = abs(integrate_weighted(one, ball, QuadratureSpec(32, 2)) - exact)

        assert math.log2(coarse / fine) == pytest.approx(4.0, abs=0.3)


class TestFiniteDifferences:
    """Test cases for fourth-order stencils"""

    def test_first_derivative(self):
        """Test the fourth-order first difference on a smooth function"""
        x = np.linspace(0.0, 1.0, 201)

        np.testing.assert_allclose(first_derivative(np.sin(x), x[1] - x[0]), np.cos(x), atol=1e-8)

    def test_second_derivative(self):
        """Test the fourth-order second difference on a smooth function"""
        x = np.linspace(0.0, 1.0, 201)

        np.testing.assert_allclose(second_derivative(np.sin(x), x[1] - x[0]), -np.sin(x), atol=1e-6)

    def test_fourth_order_exact_on_quartic(self):
        """Test stencils, edges included, differentiate x^4 exactly"""
        x = np.linspace(-1.0, 1.0, 11)
        h = x[1] - x[0]

        np.testing.assert_allclose(first_derivative(x**4, h), 4 * x**3, atol=1e-11)
        np.testing.assert_allclose(second_derivative(x**4, h), 12 * x**2, atol=1e-9)

    def test_too_few_points(self):
        """Test stencils reject short arrays and a zero step"""
        with pytest.raises(DomainError):
            first_derivative(np.zeros(5), 0.1)
        with pytest.raises(DomainError):
            second_derivative(np.zeros(10), 0.0)

    def test_count_sign_changes(self):
        """Test sign changes are counted and exact zeros skipped"""
        assert count_sign_changes(np.array([1.0, -1.0, 0.0, -2.0, 3.0])) == 2
        assert count_sign_changes(np.zeros(4)) == 0


class TestRayleighQuotient:
    """Test cases for Rayleigh quotients and trial states"""

    @pytest.mark.parametrize("K, r0", [(-4.0, 0.5), (-1.0, 2.0), (0.0, 1.0), (1.0, math.pi / 2), (4.0, 0.7)])
    def test_ground_state_is_sharp(self, K, r0):
        """Test the Rayleigh quotient of F_1 equals lambda_1"""
        ball = GeodesicBall(CurvatureSpace(K), r0)

        assert rayleigh_quotient(eigenfunction(ball, 1), ball) == pytest.approx(eigenvalue(ball, 1), rel=1e-8)

    def test_variational_principle(self):
        """Test 200 seeded trial states never beat lambda_1"""
        ball = GeodesicBall(CurvatureSpace(-1.0), 2.0)
        lambda_1 = (math.pi / 2) ** 2 + 1.0

        for seed in range(200):
            psi = random_trial_function(ball, seed=seed, degree=6)
            assert rayleigh_quotient(psi, ball) >= lambda_1 * (1 - 1e-9)
            assert variational_ratio(psi, ball) >= 1 - 1e-9

    def test_trial_is_deterministic(self):
        """Test one seed always produces the same trial state"""
        ball = GeodesicBall(CurvatureSpace(1.0), 1.0)
        r = np.linspace(0.0, 1.0, 17)

        first = random_trial_function(ball, seed=7, degree=4)
        second = random_trial_function(ball, seed=7, degree=4)

        np.testing.assert_array_equal(first(r), second(r))
        assert first(1.0) == 0.0

    @pytest.mark.parametrize("degree", [0, -2, 2.5])
    def test_invalid_degree(self, degree):
        """Test trial polynomials need degree >= 1"""
        with pytest.raises(DomainError):
            random_trial_function(GeodesicBall(CurvatureSpace(0.0), 1.0), seed=1, degree=degree)

    def test_redraw_exhaustion(self):
        """Test a draw that never clears the norm threshold raises"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)

        with patch("app.numerics.variational.MIN_TRIAL_NORM", math.inf):
            with pytest.raises(ConvergenceError):
                random_trial_function(ball, seed=3, degree=2)

    def test_zero_state(self):
        """Test the Rayleigh quotient of the zero state is rejected"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)
        zero = RadialFunction(ball=ball, rule=lambda r: np.zeros_like(r), derivative=lambda r: np.zeros_like(r))

        with pytest.raises(DomainError):
            rayleigh_quotient(zero, ball)

    @pytest.mark.parametrize("K, r0", [(-1.0, 1.0), (0.0, 1.0), (1.0, 1.0)])
    def test_gradient_and_laplacian_forms_agree(self, K, r0):
        """Test the gradient and Laplacian forms of sigma_p agree"""
        ball = GeodesicBall(CurvatureSpace(K), r0)
        psi = random_trial_function(ball, seed=11, degree=5)

        assert radial_laplacian_expectation(psi, ball) == pytest.approx(rayleigh_quotient(psi, ball), rel=1e-5)

    def test_momentum_stddev_scales_with_hbar(self):
        """Test sigma_p is linear in hbar"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)
        psi = eigenfunction(ball, 1)

        assert momentum_stddev(psi, ball, hbar=2.0) == pytest.approx(2.0 * math.pi, rel=1e-8)


class TestShooting:
    """Test cases for the shooting eigenvalue oracle"""

    def test_series_start(self):
        """Test the Frobenius start is F = 1, F' = 0 at the centre"""
        assert regular_series_start(1.0, 5.0, 0.0) == (1.0, 0.0)

    @pytest.mark.parametrize(
        "K, r0, n",
        [(0.0, 1.0, 1), (-1.0, math.pi, 2), (1.0, 1.5, 3), (4.0, 0.5, 1), (-4.0, 0.5, 2), (1.0, 2.5, 1)],
    )
    def test_matches_closed_form(self, K, r0, n):
        """Test shooting reproduces the closed-form eigenvalue and node count"""
        ball = GeodesicBall(CurvatureSpace(K), r0)

        result = solve_eigenvalue_numeric(ball, n, tol=1e-10)

        assert result.lambda_hat == pytest.approx(eigenvalue(ball, n), rel=1e-8)
        assert result.interior_zeros == n - 1
        assert result.boundary_residual < 1e-7
        assert result.converged

    @pytest.mark.parametrize(
        "K, r0, n",
        [(-1.0, 26.0, 1), (-1.0, 50.0, 1), (-1.0, 30.0, 3), (-4.0, 12.0, 2)],
    )
    def test_large_hyperbolic_balls(self, K, r0, n):
        """Test exponentially decaying modes on large hyperbolic balls still resolve to 1e-8"""
        ball = GeodesicBall(CurvatureSpace(K), r0)

        result = solve_eigenvalue_numeric(ball, n, tol=1e-10)

        assert result.lambda_hat == pytest.approx(eigenvalue(ball, n), rel=1e-8)
        assert result.interior_zeros == n - 1
        assert result.boundary_residual < 1e-7

    def test_boundary_phase_at_eigenvalue(self):
        """Test theta(r0) lands on n pi at the closed-form eigenvalue"""
        ball = GeodesicBall(CurvatureSpace(-1.0), 40.0)
        shooter = RadialShooter(ball)

        for n in (1, 2):
            assert shooter.boundary_phase(eigenvalue(ball, n)) == pytest.approx(n * math.pi, abs=1e-8)

    def test_residual_is_relative(self):
        """Test the boundary residual is scale-free where F has decayed by e^-40"""
        ball = GeodesicBall(CurvatureSpace(-1.0), 40.0)
        shooter = RadialShooter(ball)
        lam = eigenvalue(ball, 1)

        assert shooter.boundary_residual(lam) < 1e-7
        assert shooter.boundary_residual(lam * (1 + 1e-3)) > 1e-7
        _, profile = shooter.profile(lam)
        assert np.max(np.abs(profile)) == 1.0

    def test_non_positive_lambda(self):
        """Test the phase integration rejects lambda <= 0"""
        shooter = RadialShooter(GeodesicBall(CurvatureSpace(0.0), 1.0))

        with pytest.raises(DomainError):
            shooter.integrate(0.0)

    def test_hinted_window(self):
        """Test the hinted scan window finds the same eigenvalue"""
        ball = GeodesicBall(CurvatureSpace(-1.0), 1.0)

        result = solve_eigenvalue_numeric(ball, 2, tol=1e-10, hinted=True)

        assert result.lambda_hat == pytest.approx(eigenvalue(ball, 2), rel=1e-8)

    def test_interior_zeros(self):
        """Test the third flat mode has two interior zeros"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)
        shooter = RadialShooter(ball)

        assert shooter.interior_zeros(eigenvalue(ball, 3)) == 2

    @pytest.mark.parametrize("n, tol", [(0, 1e-10), (1.0, 1e-10), (1, 0.0), (1, math.nan)])
    def test_invalid_arguments(self, n, tol):
        """Test bad mode indices and tolerances are rejected"""
        with pytest.raises(DomainError):
            solve_eigenvalue_numeric(GeodesicBall(CurvatureSpace(0.0), 1.0), n, tol)

    def test_scan_exhaustion(self):
        """Test a scan that runs out of steps raises ConvergenceError"""
        ball = GeodesicBall(CurvatureSpace(0.0), 1.0)

        with patch("app.numerics.shooting.MAX_SCAN_STEPS", 1):
            with pytest.raises(ConvergenceError):
                solve_eigenvalue_numeric(ball, 3)
