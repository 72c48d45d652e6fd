"""
Constant-curvature model spaces and geodesic balls.

Radial quantities are written in geodesic polar coordinates about the ball
centre, where the metric reads dr^2 + s_K(r)^2 (dtheta^2 + sin^2 theta dphi^2).
Every radial function accepts a float or a numpy array of radii.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from app.errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Below this value of |K| r^2 the sin/sinh quotients are replaced by their
# expansion to second order in K.
SMALL_CURVATURE_THRESHOLD = 1e-8

# x - sin(x) and sinh(x) - x are summed from their series below this argument.
_SERIES_ARGUMENT_LIMIT = 0.5
_SERIES_TERMS = 10
_ODD_FACTORIALS = np.array([math.factorial(2 * k + 1) for k in range(1, _SERIES_TERMS + 1)], dtype=float)


@dataclass(frozen=True)
class CurvatureSpace:
    """Simply connected 3-space of constant sectional curvature ``K`` (1/length^2)."""

    K: float

    def __post_init__(self):
        if not math.isfinite(self.K):
            raise DomainError(f"Sectional curvature must be finite, got {self.K!r}")
        object.__setattr__(self, "K", float(self.K))

    @classmethod
    def from_radius(cls, R: float, sign: int = 1) -> "CurvatureSpace":
        """
        Build the 3-sphere (sign=+1) or hyperbolic 3-space (sign=-1) of radius R.

        Args:
            R: Curvature radius, K = sign / R^2
            sign: +1 for S^3, -1 for H^3

        Returns:
            CurvatureSpace with K = ±1/R^2
        """
        if not (math.isfinite(R) and R > 0):
            raise DomainError(f"Curvature radius must be positive and finite, got {R!r}")
        if sign not in (1, -1):
            raise DomainError(f"Curvature sign must be +1 or -1, got {sign!r}")
        return cls(sign / R**2)

    @property
    def radius(self) -> Optional[float]:
        """Curvature radius R = |K|^(-1/2), or None in flat space."""
        if self.K == 0.0:
            return None
        return 1.0 / math.sqrt(abs(self.K))

    @property
    def sqrt_abs_K(self) -> float:
        return math.sqrt(abs(self.K))

    @property
    def kind(self) -> str:
        if self.K > 0:
            return "spherical"
        if self.K < 0:
            return "hyperbolic"
        return "flat"


@dataclass(frozen=True)
class RadiusLimit:
    """Supremum of admissible geodesic radii. ``value`` is None when radii are unbounded."""

    value: Optional[float] = None

    @property
    def bounded(self) -> bool:
        return self.value is not None

    def admits(self, r: float, inclusive: bool = False) -> bool:
        """Check a radius against the limit (strictly below it unless ``inclusive``)."""
        if self.value is None:
            return math.isfinite(r)
        return r <= self.value if inclusive else r < self.value

    def __str__(self) -> str:
        return "unbounded" if self.value is None else repr(self.value)


UNBOUNDED = RadiusLimit()


@dataclass(frozen=True)
class GeodesicBall:
    """Open geodesic ball of radius ``r0`` in a constant-curvature space."""

    space: CurvatureSpace
    r0: float

    def __post_init__(self):
        r0 = float(self.r0)
        if not (math.isfinite(r0) and r0 > 0):
            raise DomainError(f"Geodesic radius must be positive and finite, got {self.r0!r}")
        limit = max_radius(self.space)
        if not limit.admits(r0):
            raise DomainError(
                f"Geodesic radius {r0!r} must be strictly below pi/sqrt(K) = {limit.value!r} "
                f"for K = {self.space.K!r}"
            )
        object.__setattr__(self, "r0", r0)

    @property
    def K(self) -> float:
        return self.space.K


def max_radius(space: CurvatureSpace) -> RadiusLimit:
    """Largest geodesic radius: pi/sqrt(K) on the sphere, unbounded otherwise."""
    if space.K > 0:
        return RadiusLimit(math.pi / math.sqrt(space.K))
    return UNBOUNDED


def validate_ball(space: CurvatureSpace, r0: float) -> GeodesicBall:
    """
    Validate a localization domain.

    Args:
        space: Model space
        r0: Geodesic radius of the ball

    Returns:
        GeodesicBall with 0 < r0 (< pi/sqrt(K) when K > 0)

    Raises:
        DomainError: If r0 is not admissible
    """
    ball = GeodesicBall(space, r0)
    logger.debug(f"Validated geodesic ball r0={ball.r0} in {space.kind} space K={space.K}")
    return ball


def _radii(space: CurvatureSpace, r: ArrayLike) -> np.ndarray:
    """Coerce radii to an array and reject values outside [0, pi/sqrt(K)]."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < 0):
        raise DomainError(f"Geodesic radius must be finite and non-negative, got {r!r}")
    limit = max_radius(space)
    if limit.bounded and np.any(r_arr > limit.value):
        raise DomainError(f"Geodesic radius exceeds pi/sqrt(K) = {limit.value!r} for K = {space.K!r}")
    return r_arr


def _x_minus_sin(x: np.ndarray) -> np.ndarray:
    return _odd_remainder(x, alternating=True)


def _sinh_minus_x(x: np.ndarray) -> np.ndarray:
    return _odd_remainder(x, alternating=False)


def _odd_remainder(x: np.ndarray, alternating: bool) -> np.ndarray:
    """x - sin(x) (alternating) or sinh(x) - x, free of cancellation for small x."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < _SERIES_ARGUMENT_LIMIT
    if np.any(small):
        xs = x[small][..., None]
        powers = xs ** (2 * np.arange(1, _SERIES_TERMS + 1) + 1)
        signs = (-1.0) ** np.arange(_SERIES_TERMS) if alternating else np.ones(_SERIES_TERMS)
        out[small] = np.sum(signs * powers / _ODD_FACTORIALS, axis=-1)
    large = ~small
    if np.any(large):
        xl = x[large]
        out[large] = xl - np.sin(xl) if alternating else np.sinh(xl) - xl
    return out


def metric_factor(space: CurvatureSpace, r: ArrayLike) -> ArrayLike:
    """
    Angular metric factor s_K(r).

    sin(sqrt(K) r)/sqrt(K) for K > 0, r for K = 0 and sinh(sqrt(|K|) r)/sqrt(|K|)
    for K < 0. Continuous in K: when |K| r^2 is tiny the second-order series
    r (1 - K r^2/6 + K^2 r^4/120) is returned instead of the quotient.

    Raises:
        DomainError: If r < 0 or r > pi/sqrt(K) on the sphere
    """
    r_arr = _radii(space, r)
    K = space.K
    if K == 0.0:
        return (r_arr * 1.0)[()]
    a = space.sqrt_abs_K
    series = r_arr * (1.0 - K * r_arr**2 / 6.0 + K**2 * r_arr**4 / 120.0)
    direct = np.sin(a * r_arr) / a if K > 0 else np.sinh(a * r_arr) / a
    small = abs(K) * r_arr**2 < SMALL_CURVATURE_THRESHOLD
    return np.where(small, series, direct)[()]


def metric_factor_derivative(space: CurvatureSpace, r: ArrayLike) -> ArrayLike:
    """d s_K / dr: cos(sqrt(K) r), 1 or cosh(sqrt(|K|) r)."""
    r_arr = _radii(space, r)
    K = space.K
    if K == 0.0:
        return np.ones_like(r_arr)[()]
    a = space.sqrt_abs_K
    return (np.cos(a * r_arr) if K > 0 else np.cosh(a * r_arr))[()]


def log_derivative_rule(space: CurvatureSpace) -> Callable[[float], float]:
    """
    Scalar rule r -> s_K'(r)/s_K(r) for r > 0.

    This is sqrt(K) cot(sqrt(K) r), 1/r or sqrt(|K|) coth(sqrt(|K|) r); it is
    half the first-derivative coefficient of the radial Laplacian.
    """
    K = space.K
    if K == 0.0:
        return lambda r: 1.0 / r
    a = space.sqrt_abs_K

    if K > 0:
        def rule(r: float) -> float:
            if K * r * r < SMALL_CURVATURE_THRESHOLD:
                return 1.0 / r - K * r / 3.0
            return a / math.tan(a * r)
    else:
        def rule(r: float) -> float:
            if -K * r * r < SMALL_CURVATURE_THRESHOLD:
                return 1.0 / r - K * r / 3.0
            return a / math.tanh(a * r)

    return rule


def log_derivative(space: CurvatureSpace, r: ArrayLike) -> ArrayLike:
    """Vectorised s_K'(r)/s_K(r) for radii in (0, pi/sqrt(K))."""
    r_arr = _radii(space, r)
    if np.any(r_arr == 0):
        raise DomainError("s_K'/s_K is singular at r = 0")
    return (metric_factor_derivative(space, r_arr) / metric_factor(space, r_arr))[()]


def volume_weight(space: CurvatureSpace, r: ArrayLike) -> ArrayLike:
    """Radial density w(r) = s_K(r)^2 of the Riemannian volume measure."""
    return (np.asarray(metric_factor(space, r)) ** 2)[()]


def ball_volume(space: CurvatureSpace, r: ArrayLike) -> ArrayLike:
    """
    Volume of the geodesic ball of radius r, equal to the integral of 4 pi w(t) on [0, r].

    K > 0: 2 pi r R^2 (1 - sin(2r/R)/(2r/R)); K < 0: 2 pi r R^2 (sinh(2r/R)/(2r/R) - 1);
    K = 0: 4 pi r^3 / 3. The closed sphere r = pi/sqrt(K) is accepted and gives 2 pi^2 R^3.

    Raises:
        DomainError: If r < 0 or r > pi/sqrt(K) on the sphere
    """
    r_arr = _radii(space, r)
    K = space.K
    euclidean = 4.0 * math.pi * r_arr**3 / 3.0
    if K == 0.0:
        return euclidean[()]
    a = space.sqrt_abs_K
    x = 2.0 * a * r_arr
    core = _x_minus_sin(x) if K > 0 else _sinh_minus_x(x)
    closed = math.pi * core / a**3
    series = euclidean * (1.0 - K * r_arr**2 / 5.0 + 2.0 * K**2 * r_arr**4 / 105.0)
    small = abs(K) * r_arr**2 < SMALL_CURVATURE_THRESHOLD
    return np.where(small, series, closed)[()]
