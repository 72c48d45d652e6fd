"""
Schwarzschild radius bound from the flat-space uncertainty relation.

A black hole localised inside its horizon sphere occupies a flat (K = 0)
geodesic ball of radius pi r_s / 2, so sigma_p >= 2 hbar / r_s. Together with
r_s >= 2 G sigma_p / c^3 this gives r_s >= 2 l_P.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.errors import ConvergenceError, DomainError
from app.geometry import CurvatureSpace, GeodesicBall
from app.numerics import QuadratureSpec, gauss_legendre
from app.uncertainty.bounds import momentum_lower_bound

logger = logging.getLogger(__name__)

_PANEL_NODES = 16
_MAX_NODES = 4096


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, G and c in one consistent unit system."""

    hbar: float
    G: float
    c: float

    def __post_init__(self):
        for name in ("hbar", "G", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"Physical constant {name} must be positive, got {value!r}")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        return cls(hbar=1.0, G=1.0, c=1.0)

    @classmethod
    def codata(cls) -> "PhysicalConstants":
        """SI values from scipy.constants."""
        from scipy import constants

        return cls(hbar=constants.hbar, G=constants.G, c=constants.c)

    @classmethod
    def for_mode(cls, mode: str) -> "PhysicalConstants":
        if mode == "natural":
            return cls.natural()
        if mode == "si":
            return cls.codata()
        raise DomainError(f"Unknown hbar mode {mode!r}")


def _check_positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive, got {value!r}")
    return float(value)


def planck_length(constants: PhysicalConstants) -> float:
    """l_P = sqrt(hbar G / c^3)."""
    return math.sqrt(constants.hbar * constants.G / constants.c**3)


def schwarzschild_radius(mass: float, constants: PhysicalConstants) -> float:
    """r_s = 2 G M / c^2."""
    return 2.0 * constants.G * _check_positive("mass", mass) / constants.c**2


def minimum_energy(sigma_p: float, constants: PhysicalConstants) -> float:
    """E >= c sigma_p, with equality for a massless particle."""
    return constants.c * _check_positive("sigma_p", sigma_p)


def schwarzschild_radius_bound(sigma_p: float, constants: PhysicalConstants) -> float:
    """r_s >= 2 G sigma_p / c^3, from M = E / c^2 and E >= c sigma_p."""
    return 2.0 * constants.G * minimum_energy(sigma_p, constants) / constants.c**4


def schwarzschild_geodesic_radius(r_s: float) -> float:
    """Geodesic radius of the horizon sphere, pi r_s / 2."""
    return math.pi * _check_positive("r_s", r_s) / 2.0


def schwarzschild_integral_numeric(r_s: float, tol: float = 1e-10) -> float:
    """
    Quadrature of the radial proper-length integral |1 - r_s/t|^(-1/2) over t in [0, r_s].

    Both endpoint singularities are removed by t = r_s sin^2(theta); the
    transformed integrand is integrated with composite Gauss-Legendre, doubling
    the panel count until successive values agree to ``tol`` (relative).

    Raises:
        DomainError: If r_s <= 0 or tol <= 0
        ConvergenceError: If the rule does not settle within 4096 nodes
    """
    r_s = _check_positive("r_s", r_s)
    tol = _check_positive("tol", tol)

    def integrand(theta: np.ndarray) -> np.ndarray:
        t = r_s * np.sin(theta) ** 2
        jacobian = 2.0 * r_s * np.sin(theta) * np.cos(theta)
        return jacobian * np.abs(1.0 - r_s / t) ** -0.5

    nodes = _PANEL_NODES
    previous = gauss_legendre(integrand, 0.0, math.pi / 2.0, QuadratureSpec(nodes, _PANEL_NODES))
    while nodes < _MAX_NODES:
        nodes *= 2
        current = gauss_legendre(integrand, 0.0, math.pi / 2.0, QuadratureSpec(nodes, _PANEL_NODES))
        if abs(current - previous) <= tol * abs(current):
            logger.debug(f"Horizon integral for r_s={r_s} settled with {nodes} nodes")
            return current
        previous = current

    logger.warning(f"Horizon integral for r_s={r_s} did not settle within {_MAX_NODES} nodes")
    raise ConvergenceError(f"Horizon integral did not reach relative tolerance {tol}")


def schwarzschild_momentum_bound(r_s: float, hbar: float = 1.0) -> float:
    """sigma_p >= 2 hbar / r_s: the flat-space bound on the ball of radius pi r_s / 2."""
    ball = GeodesicBall(CurvatureSpace(0.0), schwarzschild_geodesic_radius(r_s))
    return momentum_lower_bound(ball, hbar)


def min_schwarzschild_radius(constants: PhysicalConstants) -> float:
    """r_s >= 2 l_P, the fixed point of r_s = (2 G / c^3)(2 hbar / r_s)."""
    return 2.0 * planck_length(constants)
