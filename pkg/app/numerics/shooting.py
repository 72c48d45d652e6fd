"""
Shooting-method eigenvalue solver for the singular radial equation

    F'' + 2 q(r) F' + lambda F = 0,   F(r0) = 0,

with q = s_K'/s_K = sqrt(K) cot(sqrt(K) r), 1/r or sqrt(|K|) coth(sqrt(|K|) r).

The regular solution is started a short distance off the centre from its
Frobenius series and carried in scaled Prufer variables

    F = exp(L) sin(theta),   F' = sqrt(lambda) exp(L) cos(theta),
    theta' = sqrt(lambda) + q sin(2 theta),   L' = -2 q cos(theta)^2,

so the phase stays O(1) even where F itself decays exponentially. theta
crosses multiples of pi only upwards, and mode n is the root of
theta(r0; lambda) = n pi, which is increasing in lambda. The root is
bracketed by a scan up from the spectral floor, narrowed by bisection and
polished by secant iteration. The closed form is never consulted unless
the caller asks for a hinted scan window.
"""

import logging
import math
import numbers
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, root_scalar

from app.errors import ConvergenceError, DomainError
from app.geometry import GeodesicBall, log_derivative_rule
from app.numerics.differences import count_sign_changes
from app.spectra import eigenvalue

logger = logging.getLogger(__name__)

SERIES_START_FRACTION = 1e-6
REFINE_RTOL = 1e-12
REFINE_ATOL = 1e-12
SCAN_RTOL = 1e-8
SCAN_ATOL = 1e-9
BISECTION_WIDTH_FRACTION = 1e-3
SCAN_OFFSET_FRACTION = 1e-6
MAX_SCAN_STEPS = 10_000
MAX_SECANT_ITERATIONS = 50
# |F(r0)| relative to the local envelope, not to F(0)
BOUNDARY_RESIDUAL_TOLERANCE = 1e-7
NODE_SAMPLES = 4000


@dataclass(frozen=True)
class ShootingResult:
    """Outcome of one shooting solve for mode ``n``."""

    n: int
    lambda_hat: float
    boundary_residual: float
    iterations: int
    interior_zeros: int
    converged: bool = True


def regular_series_start(K: float, lam: float, r: float) -> Tuple[float, float]:
    """
    F and F' of the regular solution normalised to F(0) = 1, to fourth order.

    F(r) = 1 - lambda r^2 / 6 + lambda (3 lambda - 4 K) r^4 / 360 + O(r^6).
    """
    a2 = -lam / 6.0
    a4 = lam * (3.0 * lam - 4.0 * K) / 360.0
    return 1.0 + a2 * r**2 + a4 * r**4, 2.0 * a2 * r + 4.0 * a4 * r**3


class RadialShooter:
    """Integrates the regular radial solution across one geodesic ball in Prufer form."""

    def __init__(self, ball: GeodesicBall):
        self.ball = ball
        self.start = SERIES_START_FRACTION * ball.r0
        self._coefficient = log_derivative_rule(ball.space)

    def _initial_state(self, lam: float) -> Tuple[float, float]:
        c = math.sqrt(lam)
        f, df = regular_series_start(self.ball.K, lam, self.start)
        return math.atan2(c * f, df), 0.5 * math.log(f * f + (df / c) ** 2)

    def integrate(self, lam: float, rtol: float = REFINE_RTOL, atol: float = REFINE_ATOL, dense: bool = False):
        """Solve for (theta, L) on [start, r0]; ``lam`` must be positive."""
        if not lam > 0.0:
            raise DomainError(f"Prufer integration needs lambda > 0, got {lam!r}")
        coefficient = self._coefficient
        c = math.sqrt(lam)

        def rhs(r: float, y):
            q = coefficient(r)
            return [c + q * math.sin(2.0 * y[0]), -2.0 * q * math.cos(y[0]) ** 2]

        sol = solve_ivp(
            rhs,
            (self.start, self.ball.r0),
            self._initial_state(lam),
            method="DOP853",
            rtol=rtol,
            atol=atol,
            dense_output=dense,
        )
        if not sol.success:
            logger.warning(f"Radial integration failed at lambda={lam}: {sol.message}")
            raise ConvergenceError(f"Radial integration failed at lambda={lam}: {sol.message}")
        return sol

    def boundary_phase(self, lam: float, rtol: float = REFINE_RTOL, atol: float = REFINE_ATOL) -> float:
        """theta(r0; lambda)."""
        return float(self.integrate(lam, rtol, atol).y[0, -1])

    def profile(self, lam: float, samples: int = NODE_SAMPLES) -> Tuple[np.ndarray, np.ndarray]:
        """Radii and F(r) scaled to max |F| = 1, the boundary point included."""
        sol = self.integrate(lam, dense=True)
        r = np.linspace(self.start, self.ball.r0, samples)
        theta, log_amplitude = sol.sol(r)
        f = np.exp(log_amplitude - log_amplitude.max()) * np.sin(theta)
        return r, f / np.max(np.abs(f))

    def interior_zeros(self, lam: float) -> int:
        """Sign changes of F(.; lambda) on (0, r0), the boundary zero excluded."""
        r, f = self.profile(lam)
        return count_sign_changes(f[r <= self.ball.r0 * (1.0 - 1e-3)])

    def boundary_residual(self, lam: float) -> float:
        """|F(r0)| relative to the local amplitude exp(L(r0)), i.e. |sin theta(r0)|."""
        return abs(math.sin(self.boundary_phase(lam)))


def _scan_for_bracket(phi: Callable[[float], float], floor: float, step: float) -> Tuple[float, float, int]:
    lam_prev = floor
    if phi(floor) >= 0.0:
        raise ConvergenceError(f"Spectral floor {floor} already lies above the requested mode")
    for i in range(1, MAX_SCAN_STEPS + 1):
        lam = floor + i * step
        if phi(lam) >= 0.0:
            logger.debug(f"Phase target crossed in [{lam_prev}, {lam}]")
            return lam_prev, lam, i + 1
        lam_prev = lam
    raise ConvergenceError(f"No bracket within {MAX_SCAN_STEPS} scan steps")


def _bisect(phi: Callable[[float], float], lo: float, hi: float, width: float) -> Tuple[float, float, int]:
    evaluations = 0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        evaluations += 1
        if phi(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return lo, hi, evaluations


def solve_eigenvalue_numeric(
    ball: GeodesicBall,
    n: int,
    tol: float = 1e-10,
    hinted: bool = False,
    max_iterations: int = MAX_SECANT_ITERATIONS,
) -> ShootingResult:
    """
    Find the n-th radial Dirichlet eigenvalue by shooting.

    Args:
        ball: Geodesic ball
        n: Mode index (>= 1); the eigenfunction has n - 1 interior zeros
        tol: Relative tolerance of the secant iteration on lambda
        hinted: Centre the scan window on the closed form instead of scanning up from the spectral floor
        max_iterations: Secant iteration budget

    Returns:
        ShootingResult with the converged eigenvalue

    Raises:
        DomainError: If n < 1 or tol <= 0
        ConvergenceError: If no bracket is found, the secant iteration fails,
            or the converged solution has the wrong node count or boundary residual
    """
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise DomainError(f"Mode index must be an integer >= 1, got {n!r}")
    if not (math.isfinite(tol) and tol > 0):
        raise DomainError(f"Tolerance must be positive, got {tol!r}")

    shooter = RadialShooter(ball)
    target = n * math.pi
    step = (math.pi / ball.r0) ** 2 / 4.0
    floor = max(0.0, -ball.K) + SCAN_OFFSET_FRACTION * step

    def coarse(lam: float) -> float:
        return shooter.boundary_phase(lam, SCAN_RTOL, SCAN_ATOL) - target

    def fine(lam: float) -> float:
        return shooter.boundary_phase(lam) - target

    if hinted:
        centre = eigenvalue(ball, n)
        lo, hi = max(floor, centre - step), centre + step
        if coarse(lo) >= 0.0 or coarse(hi) < 0.0:
            raise ConvergenceError(f"Hinted window [{lo}, {hi}] does not bracket mode {n}")
        evaluations = 2
    else:
        lo, hi, evaluations = _scan_for_bracket(coarse, floor, step)

    width = BISECTION_WIDTH_FRACTION * step
    lo, hi, bisections = _bisect(coarse, lo, hi, width)
    evaluations += bisections

    try:
        root = root_scalar(
            fine,
            x0=lo,
            x1=hi,
            method="secant",
            xtol=0.1 * tol * hi,
            maxiter=max_iterations,
        )
        lambda_hat, converged, flag = root.root, root.converged, root.flag
        iterations = evaluations + root.iterations
    except DomainError as e:
        # secant stepped to lambda <= 0
        lambda_hat, converged, flag = math.nan, False, str(e)
        iterations = evaluations
    if not converged or not (lo - width <= lambda_hat <= hi + width):
        logger.debug(f"Secant left the bracket for mode {n} ({flag}); falling back to Brent")
        a, b = max(floor, lo - width), hi + width
        if fine(a) * fine(b) > 0.0:
            logger.warning(f"Mode {n} on r0={ball.r0}, K={ball.K} lost its bracket during refinement")
            raise ConvergenceError(f"Secant iteration for mode {n} did not converge: {flag}")
        lambda_hat, info = brentq(fine, a, b, xtol=0.1 * tol * b, maxiter=max_iterations, full_output=True)
        iterations = evaluations + info.iterations

    residual = shooter.boundary_residual(lambda_hat)
    zeros = shooter.interior_zeros(lambda_hat)
    if zeros != n - 1:
        raise ConvergenceError(f"Converged solution for mode {n} has {zeros} interior zeros, expected {n - 1}")
    if residual > BOUNDARY_RESIDUAL_TOLERANCE:
        raise ConvergenceError(f"Boundary residual {residual:.3e} for mode {n} exceeds {BOUNDARY_RESIDUAL_TOLERANCE}")

    logger.debug(f"Mode {n} on r0={ball.r0}, K={ball.K}: lambda={lambda_hat!r} after {iterations} evaluations")
    return ShootingResult(
        n=n,
        lambda_hat=float(lambda_hat),
        boundary_residual=residual,
        iterations=iterations,
        interior_zeros=zeros,
    )
