"""
Momentum uncertainty bounds on geodesic balls.

A particle strictly localised in a geodesic ball of radius r in a 3-space of
constant curvature K satisfies

    sigma_p r >= pi hbar (1 - K r^2 / pi^2)^(1/2),

with equality for the radial ground state. The bound is hbar sqrt(lambda_1).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

from app.errors import DomainError
from app.geometry import CurvatureSpace, GeodesicBall, max_radius
from app.spectra import eigenvalue

logger = logging.getLogger(__name__)

# Fraction of pi/sqrt(K) kept free when a radius range is clipped on the sphere.
CLOSURE_MARGIN = 1e-8

# Relative tolerance deciding equality in the Reilly comparison.
REILLY_EQUALITY_RTOL = 1e-12


def _check_hbar(hbar: float) -> float:
    if not (math.isfinite(hbar) and hbar > 0):
        raise DomainError(f"hbar must be positive, got {hbar!r}")
    return float(hbar)


def momentum_lower_bound(ball: GeodesicBall, hbar: float = 1.0) -> float:
    """
    Largest lower bound of sigma_p on the ball: hbar sqrt((pi/r0)^2 - K) = hbar sqrt(lambda_1).

    Args:
        ball: Localization domain
        hbar: Reduced Planck constant in the caller's units

    Returns:
        Minimum momentum standard deviation (hbar / length)
    """
    hbar = _check_hbar(hbar)
    if ball.K == 0.0:
        return hbar * (math.pi / ball.r0)
    return hbar * math.sqrt(eigenvalue(ball, 1))


def uncertainty_product(ball: GeodesicBall, hbar: float = 1.0) -> float:
    """r0 times the momentum bound, pi hbar sqrt(1 - K r0^2 / pi^2); exactly pi hbar when K = 0."""
    hbar = _check_hbar(hbar)
    return math.pi * hbar * math.sqrt(1.0 - ball.K * ball.r0**2 / math.pi**2)


def hyperbolic_floor(space: CurvatureSpace, hbar: float = 1.0) -> float:
    """
    Radius-independent floor hbar sqrt(|K|) of the bound in hyperbolic space.

    Raises:
        DomainError: If K >= 0
    """
    if space.K >= 0:
        raise DomainError(f"The momentum floor exists only for K < 0, got K = {space.K!r}")
    return _check_hbar(hbar) * math.sqrt(-space.K)


def _taylor_expression(K: float, r: float, hbar: float) -> float:
    return math.pi * hbar * (1.0 / r - K * r / (2.0 * math.pi**2))


def taylor_bound(ball: GeodesicBall, hbar: float = 1.0) -> float:
    """First-order small-radius expansion pi hbar (1/r - K r / (2 pi^2)), remainder dropped."""
    return _taylor_expression(ball.K, ball.r0, _check_hbar(hbar))


def taylor_remainder(ball: GeodesicBall, hbar: float = 1.0) -> float:
    """
    Exact bound minus its first-order expansion.

    With x = K r^2 / pi^2 and u = sqrt(1 - x) this is
    -(pi hbar / r) x^2 / (2 (1 + u)^2), which avoids subtracting two nearly
    equal numbers at small radii. It is always <= 0.
    """
    hbar = _check_hbar(hbar)
    x = ball.K * ball.r0**2 / math.pi**2
    u = math.sqrt(1.0 - x)
    return -(math.pi * hbar / ball.r0) * x**2 / (2.0 * (1.0 + u) ** 2)


@dataclass(frozen=True)
class TaylorExtremum:
    """Characteristic radius of the first-order expansion."""

    radius: float
    kind: str  # "minimum" (K < 0) or "root" (K > 0)
    in_domain: bool
    value: float


def taylor_extremum(space: CurvatureSpace, hbar: float = 1.0) -> TaylorExtremum:
    """
    Where the first-order expansion stops behaving like the exact bound.

    K < 0: the expansion has a minimum at r = pi sqrt(2/|K|), inside the domain.
    K > 0: the expansion vanishes at r = pi sqrt(2/K), beyond pi/sqrt(K).

    Raises:
        DomainError: If K = 0
    """
    hbar = _check_hbar(hbar)
    K = space.K
    if K == 0.0:
        raise DomainError("The first-order expansion has no extremum in flat space")
    radius = math.pi * math.sqrt(2.0 / abs(K))
    if K < 0:
        return TaylorExtremum(radius, "minimum", True, _taylor_expression(K, radius, hbar))
    return TaylorExtremum(radius, "root", max_radius(space).admits(radius), 0.0)


@dataclass(frozen=True)
class BoundRow:
    K: float
    r: float
    sigma_p_min: float
    product: float


@dataclass(frozen=True)
class BoundTable:
    """
    Momentum bound curves, one block of rows per curvature in input order,
    radii ascending within a block.
    """

    rows: Tuple[BoundRow, ...]
    hbar: float = 1.0
    asymptotes: Dict[float, float] = field(default_factory=dict)
    equators: Dict[float, float] = field(default_factory=dict)

    def curve(self, K: float) -> Tuple[BoundRow, ...]:
        return tuple(row for row in self.rows if row.K == K)


def figure1_table(
    K_list: Iterable[float],
    r_min: float,
    r_max: float,
    steps: int,
    hbar: float = 1.0,
) -> BoundTable:
    """
    Tabulate the momentum bound against geodesic radius for several curvatures.

    On the sphere the radius range is clipped just below pi/sqrt(K), where the
    bound closes to zero. Hyperbolic curves carry their floor hbar sqrt(|K|) as
    asymptote metadata; spherical ones carry the equator radius pi/(2 sqrt(K)).

    Raises:
        DomainError: If the range is empty (also after clipping) or steps < 1
    """
    hbar = _check_hbar(hbar)
    curvatures = [float(K) for K in K_list]
    if not curvatures:
        raise DomainError("At least one curvature is required")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps!r}")
    if not (math.isfinite(r_min) and math.isfinite(r_max) and 0 < r_min <= r_max):
        raise DomainError(f"Empty radius range ({r_min!r}, {r_max!r})")

    rows = []
    asymptotes: Dict[float, float] = {}
    equators: Dict[float, float] = {}
    for K in curvatures:
        space = CurvatureSpace(K)
        limit = max_radius(space)
        upper = r_max
        if limit.bounded and not limit.admits(upper):
            upper = limit.value * (1.0 - CLOSURE_MARGIN)
        if upper < r_min:
            raise DomainError(f"Radius range ({r_min!r}, {r_max!r}) is empty after clipping at {limit} for K = {K!r}")

        radii = np.linspace(r_min, upper, steps) if steps > 1 else np.array([r_min])
        for r in radii:
            ball = GeodesicBall(space, float(r))
            sigma = momentum_lower_bound(ball, hbar)
            rows.append(BoundRow(K=K, r=ball.r0, sigma_p_min=sigma, product=sigma * ball.r0))

        if K < 0:
            asymptotes[K] = hyperbolic_floor(space, hbar)
        elif K > 0:
            equators[K] = limit.value / 2.0

    logger.debug(f"Built bound table with {len(rows)} rows for K in {curvatures}")
    return BoundTable(rows=tuple(rows), hbar=hbar, asymptotes=asymptotes, equators=equators)


@dataclass(frozen=True)
class ReillyReport:
    """Both sides of lambda_1 >= 3K on a spherical ball, with the hemisphere hypothesis."""

    K: float
    r0: float
    lambda_1: float
    reilly_bound: float
    hemisphere_radius: float
    hypothesis_holds: bool
    satisfied: bool
    saturated: bool

    @property
    def status(self) -> str:
        if not self.hypothesis_holds:
            return "skipped"
        if self.saturated:
            return "saturated"
        return "holds" if self.satisfied else "violated"


def reilly_report(ball: GeodesicBall) -> ReillyReport:
    """
    Compare lambda_1 with the Reilly bound 3K (n = 3, k = K).

    The bound assumes a weakly convex boundary, which on S^3 means the ball
    stays inside a hemisphere: r0 <= pi / (2 sqrt(K)).

    Raises:
        DomainError: If K <= 0
    """
    K = ball.K
    if K <= 0:
        raise DomainError(f"The Reilly comparison needs K > 0, got K = {K!r}")
    lambda_1 = eigenvalue(ball, 1)
    bound = 3.0 * K
    hemisphere = math.pi / (2.0 * math.sqrt(K))
    hypothesis = ball.r0 <= hemisphere or math.isclose(ball.r0, hemisphere, rel_tol=REILLY_EQUALITY_RTOL)
    saturated = math.isclose(lambda_1, bound, rel_tol=REILLY_EQUALITY_RTOL)
    return ReillyReport(
        K=K,
        r0=ball.r0,
        lambda_1=lambda_1,
        reilly_bound=bound,
        hemisphere_radius=hemisphere,
        hypothesis_holds=hypothesis,
        satisfied=lambda_1 >= bound or saturated,
        saturated=saturated,
    )


def reilly_check(ball: GeodesicBall) -> bool:
    """True iff the hemisphere hypothesis implies lambda_1 >= 3K on this ball."""
    report = reilly_report(ball)
    if not report.hypothesis_holds:
        logger.info(f"Reilly hypothesis fails for r0={ball.r0} (hemisphere {report.hemisphere_radius}); check skipped")
        return True
    return report.satisfied
