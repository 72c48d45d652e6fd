"""
Closed-form Dirichlet eigenpairs of the radial Laplacian on geodesic balls.

For zero angular momentum the eigenvalue problem on a ball of radius r0 has

    lambda_n = (n pi / r0)^2 - K,
    F_n(r)   = sqrt(2 |K| / r0) sin(n pi r / r0) / sin(sqrt(K) r)      (K > 0),
               sqrt(2 |K| / r0) sin(n pi r / r0) / sinh(sqrt(|K|) r)   (K < 0),
               sqrt(2 / r0)     sin(n pi r / r0) / r                   (K = 0),

normalised so that the integral of F_n^2 s_K^2 over [0, r0] is one.
"""

import logging
import math
import numbers
from dataclasses import dataclass
from functools import partial
from typing import List

import numpy as np

from app.errors import DomainError
from app.geometry import GeodesicBall, metric_factor, metric_factor_derivative
from app.spectra.radial import RadialFunction

logger = logging.getLogger(__name__)

# Radii below this fraction of r0 use the series of the 0/0 quotient.
SERIES_RADIUS_FRACTION = 1e-4


@dataclass(frozen=True)
class EigenPair:
    """Mode ``n`` of the ball with its eigenvalue and normalization constant."""

    ball: GeodesicBall
    n: int
    eigenvalue: float
    norm_const: float


def _check_mode(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise DomainError(f"Mode index must be an integer >= 1, got {n!r}")
    return int(n)


def _radii_in_ball(ball: GeodesicBall, r) -> np.ndarray:
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < 0) or np.any(r_arr > ball.r0):
        raise DomainError(f"Radius must lie in [0, {ball.r0}], got {r!r}")
    return r_arr


def eigenvalue(ball: GeodesicBall, n: int) -> float:
    """lambda_n = (n pi / r0)^2 - K for every sign of K."""
    n = _check_mode(n)
    return (n * math.pi / ball.r0) ** 2 - ball.K


def normalization_constant(ball: GeodesicBall, n: int) -> float:
    """
    Prefactor of F_n: sqrt(2|K|/r0), or sqrt(2/r0) in flat space.

    With the trigonometric/hyperbolic denominator of the closed form this makes
    the radial norm against w(r) = s_K(r)^2 equal to one.
    """
    _check_mode(n)
    if ball.K == 0.0:
        return math.sqrt(2.0 / ball.r0)
    return math.sqrt(2.0 * abs(ball.K) / ball.r0)


def eigenpair(ball: GeodesicBall, n: int) -> EigenPair:
    n = _check_mode(n)
    return EigenPair(
        ball=ball,
        n=n,
        eigenvalue=eigenvalue(ball, n),
        norm_const=normalization_constant(ball, n),
    )


def spectrum(ball: GeodesicBall, count: int) -> List[EigenPair]:
    """First ``count`` radial eigenpairs, ordered by increasing eigenvalue."""
    count = _check_mode(count)
    return [eigenpair(ball, n) for n in range(1, count + 1)]


def _quotient_series(k: float, K: float, r: np.ndarray) -> np.ndarray:
    # sin(kr)/(k s_K(r)) to fourth order in r
    numerator = 1.0 - (k * r) ** 2 / 6.0 + (k * r) ** 4 / 120.0
    denominator = 1.0 - K * r**2 / 6.0 + K**2 * r**4 / 120.0
    return numerator / denominator


def _quotient_series_derivative(k: float, K: float, r: np.ndarray) -> np.ndarray:
    a, b = k**2 / 6.0, k**4 / 120.0
    alpha, beta = K / 6.0, K**2 / 120.0
    return 2.0 * (alpha - a) * r + 4.0 * (alpha**2 - beta - a * alpha + b) * r**3


def _denominator_scale(ball: GeodesicBall) -> float:
    # sin(sqrt(K) r) = sqrt(K) s_K(r); the flat branch has no such factor
    return ball.space.sqrt_abs_K if ball.K != 0.0 else 1.0


def eigenfunction_value(ball: GeodesicBall, n: int, r) -> np.ndarray:
    """
    Evaluate the normalised radial eigenfunction F_n at radii in [0, r0].

    The removable singularity at the centre is handled by the fourth-order
    series of numerator and denominator, so F_n(0) = sqrt(2/r0) n pi / r0.
    F_n(r0) is exactly zero.

    Raises:
        DomainError: If n < 1 or r lies outside [0, r0]
    """
    n = _check_mode(n)
    r_arr = _radii_in_ball(ball, r)
    r0 = ball.r0
    k = n * math.pi / r0

    near = r_arr < SERIES_RADIUS_FRACTION * r0
    safe = np.where(near, 0.5 * r0, r_arr)
    direct = (
        normalization_constant(ball, n)
        * np.sin(k * safe)
        / (_denominator_scale(ball) * metric_factor(ball.space, safe))
    )
    series = math.sqrt(2.0 / r0) * k * _quotient_series(k, ball.K, r_arr)

    value = np.where(near, series, direct)
    value = np.where(r_arr == r0, 0.0, value)
    return value[()]


def eigenfunction_derivative(ball: GeodesicBall, n: int, r) -> np.ndarray:
    """Analytic dF_n/dr on [0, r0]; zero at the centre."""
    n = _check_mode(n)
    r_arr = _radii_in_ball(ball, r)
    r0 = ball.r0
    k = n * math.pi / r0

    near = r_arr < SERIES_RADIUS_FRACTION * r0
    safe = np.where(near, 0.5 * r0, r_arr)
    s = metric_factor(ball.space, safe)
    ds = metric_factor_derivative(ball.space, safe)
    direct = (
        normalization_constant(ball, n)
        / _denominator_scale(ball)
        * (k * np.cos(k * safe) * s - np.sin(k * safe) * ds)
        / s**2
    )
    series = math.sqrt(2.0 / r0) * k * _quotient_series_derivative(k, ball.K, r_arr)
    return np.where(near, series, direct)[()]


def eigenfunction(ball: GeodesicBall, n: int) -> RadialFunction:
    """F_n as a RadialFunction carrying its analytic derivative."""
    n = _check_mode(n)
    return RadialFunction(
        ball=ball,
        rule=partial(eigenfunction_value, ball, n),
        derivative=partial(eigenfunction_derivative, ball, n),
        label=f"F_{n}",
    )
