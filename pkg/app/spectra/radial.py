"""
Radial profiles on a geodesic ball.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from app.errors import DomainError
from app.geometry import GeodesicBall

logger = logging.getLogger(__name__)

RadialRule = Callable[[np.ndarray], np.ndarray]

_BOUNDARY_TOLERANCE = 1e-10
_CHECK_POINTS = 33


@dataclass(frozen=True)
class RadialFunction:
    """
    Radial state psi(r) on [0, r0] obeying the Dirichlet condition psi(r0) = 0.

    ``rule`` evaluates the profile on arrays of radii. ``derivative`` is the
    analytic d/dr when one is known; sampled profiles carry their abscissae and
    values in ``grid`` and are differentiated numerically.
    """

    ball: GeodesicBall
    rule: RadialRule
    derivative: Optional[RadialRule] = None
    grid: Optional[Tuple[np.ndarray, np.ndarray]] = None
    label: str = ""

    def __post_init__(self):
        r = np.linspace(0.0, self.ball.r0, _CHECK_POINTS)
        values = np.asarray(self.rule(r), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"Radial function {self.label!r} is not finite on [0, r0]")
        scale = max(float(np.max(np.abs(values))), 1.0)
        if abs(values[-1]) > _BOUNDARY_TOLERANCE * scale:
            raise DomainError(
                f"Radial function {self.label!r} violates the Dirichlet condition: psi(r0) = {values[-1]!r}"
            )

    def __call__(self, r):
        return self.rule(np.asarray(r, dtype=float))

    @property
    def sampled(self) -> bool:
        return self.grid is not None

    def samples(self, count: int = 4097) -> Tuple[np.ndarray, np.ndarray]:
        """Values on a uniform grid over [0, r0]; sampled profiles return their own grid."""
        if self.grid is not None:
            return self.grid
        r = np.linspace(0.0, self.ball.r0, count)
        return r, np.asarray(self.rule(r), dtype=float)

    @classmethod
    def from_samples(
        cls,
        ball: GeodesicBall,
        r: np.ndarray,
        values: np.ndarray,
        label: str = "sampled",
    ) -> "RadialFunction":
        """
        Wrap a numeric profile given on a uniform grid spanning [0, r0].

        Args:
            ball: Domain of the profile
            r: Uniform abscissae from 0 to r0 (at least 6 points)
            values: Profile values; the last one must vanish
            label: Name used in logs and reports

        Returns:
            RadialFunction evaluated by cubic-spline interpolation
        """
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.shape != values.shape or r.size < 6:
            raise DomainError("Sampled profile needs matching 1-d abscissae and values (>= 6 points)")
        steps = np.diff(r)
        if not (np.isclose(r[0], 0.0) and np.isclose(r[-1], ball.r0)):
            raise DomainError(f"Sample grid must span [0, {ball.r0}]")
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise DomainError("Sample grid must be uniform and increasing")

        spline = CubicSpline(r, values)
        logger.debug(f"Wrapped sampled profile {label!r} with {r.size} points")
        return cls(
            ball=ball,
            rule=lambda x: spline(np.clip(x, 0.0, ball.r0))[()],
            grid=(r, values),
            label=label,
        )
