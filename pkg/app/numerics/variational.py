"""
Rayleigh quotients, momentum deviations and seeded trial states.

For a real radial state psi vanishing on the boundary sphere,
sigma_p^2 = -hbar^2 <psi|Laplacian psi> / <psi|psi> equals hbar^2 times the
Rayleigh quotient, the integral of psi'^2 w over that of psi^2 w.
"""

import logging
import math
import numbers
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import simpson

from app.errors import ConvergenceError, DomainError
from app.geometry import GeodesicBall, metric_factor, metric_factor_derivative, volume_weight
from app.numerics.differences import first_derivative, second_derivative
from app.numerics.quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    integrate_weighted,
    weighted_norm_squared,
)
from app.spectra import RadialFunction, eigenvalue

logger = logging.getLogger(__name__)

MIN_TRIAL_NORM = 1e-6
MAX_TRIAL_DRAWS = 100
LAPLACIAN_SAMPLES = 4097


def _check_ball(psi: RadialFunction, ball: GeodesicBall) -> None:
    if psi.ball != ball:
        raise DomainError(f"State {psi.label!r} lives on {psi.ball}, not on {ball}")


def _check_hbar(hbar: float) -> float:
    if not (math.isfinite(hbar) and hbar > 0):
        raise DomainError(f"hbar must be positive, got {hbar!r}")
    return float(hbar)


def rayleigh_quotient(
    psi: RadialFunction,
    ball: GeodesicBall,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    Gradient form of the Dirichlet energy, integral of psi'^2 w over integral of psi^2 w.

    Uses the analytic derivative of ``psi`` when it has one; sampled profiles
    are differentiated with fourth-order finite differences on their grid and
    integrated with Simpson's rule.

    Raises:
        DomainError: If psi has zero weighted norm
    """
    _check_ball(psi, ball)
    if psi.derivative is not None:
        derivative = psi.derivative
        numerator = integrate_weighted(lambda r: np.asarray(derivative(r)) ** 2, ball, quad)
        denominator = weighted_norm_squared(psi, ball, quad)
    else:
        r, values = psi.samples()
        slope = first_derivative(values, r[1] - r[0])
        w = volume_weight(ball.space, r)
        numerator = simpson(slope**2 * w, x=r)
        denominator = simpson(values**2 * w, x=r)

    if not denominator > 0.0:
        raise DomainError(f"State {psi.label!r} has zero norm")
    return numerator / denominator


def momentum_stddev(
    psi: RadialFunction,
    ball: GeodesicBall,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    hbar: float = 1.0,
) -> float:
    """sigma_p = hbar * sqrt(Rayleigh quotient)."""
    hbar = _check_hbar(hbar)
    return hbar * math.sqrt(rayleigh_quotient(psi, ball, quad))


def radial_laplacian_expectation(
    psi: RadialFunction,
    ball: GeodesicBall,
    hbar: float = 1.0,
    samples: int = LAPLACIAN_SAMPLES,
) -> float:
    """
    Laplacian form -hbar^2 <psi|Laplacian psi>/<psi|psi> of sigma_p^2.

    The radial Laplacian psi'' + 2 (s_K'/s_K) psi' is taken by finite
    differences; multiplying by w = s_K^2 first keeps the integrand regular at
    the centre.
    """
    _check_ball(psi, ball)
    hbar = _check_hbar(hbar)
    r, values = psi.samples(samples)
    h = r[1] - r[0]
    s = metric_factor(ball.space, r)
    ds = metric_factor_derivative(ball.space, r)
    weighted_laplacian = s**2 * second_derivative(values, h) + 2.0 * s * ds * first_derivative(values, h)

    denominator = simpson(values**2 * s**2, x=r)
    if not denominator > 0.0:
        raise DomainError(f"State {psi.label!r} has zero norm")
    return -(hbar**2) * simpson(values * weighted_laplacian, x=r) / denominator


def _polynomial_trial(ball: GeodesicBall, coefficients: np.ndarray, label: str) -> RadialFunction:
    r0 = ball.r0
    # sum_k c_k (r/r0)^k as a polynomial in r
    body = Polynomial(coefficients / r0 ** np.arange(coefficients.size))
    slope = body.deriv()
    return RadialFunction(
        ball=ball,
        rule=lambda r: (r0 - r) * body(r),
        derivative=lambda r: (r0 - r) * slope(r) - body(r),
        label=label,
    )


def random_trial_function(
    ball: GeodesicBall,
    seed: int,
    degree: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> RadialFunction:
    """
    Seeded trial state psi(r) = (r0 - r) * sum_{k<=degree} c_k (r/r0)^k.

    Coefficients are uniform on [-1, 1] from ``numpy.random.default_rng(seed)``;
    draws with weighted norm below 1e-6 are discarded.

    Raises:
        DomainError: If degree < 1
        ConvergenceError: If 100 consecutive draws are rejected
    """
    if isinstance(degree, bool) or not isinstance(degree, numbers.Integral) or degree < 1:
        raise DomainError(f"Trial degree must be an integer >= 1, got {degree!r}")

    rng = np.random.default_rng(seed)
    label = f"trial(seed={seed}, degree={degree})"
    for attempt in range(1, MAX_TRIAL_DRAWS + 1):
        psi = _polynomial_trial(ball, rng.uniform(-1.0, 1.0, size=degree + 1), label)
        norm = math.sqrt(weighted_norm_squared(psi, ball, quad))
        if norm >= MIN_TRIAL_NORM:
            return psi
        logger.debug(f"Redrawing {label}: weighted norm {norm:.3e} on attempt {attempt}")

    logger.warning(f"{label} rejected {MAX_TRIAL_DRAWS} draws")
    raise ConvergenceError(f"Could not draw a trial state with norm >= {MIN_TRIAL_NORM} for {label}")


def variational_ratio(psi: RadialFunction, ball: GeodesicBall, lambda_1: Optional[float] = None) -> float:
    """Rayleigh quotient divided by the ground-state eigenvalue (>= 1 by the min-max principle)."""
    if lambda_1 is None:
        lambda_1 = eigenvalue(ball, 1)
    return rayleigh_quotient(psi, ball) / lambda_1
