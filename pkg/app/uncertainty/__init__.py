"""
Uncertainty bounds, their limits and the Schwarzschild chain.
"""

from app.uncertainty.bounds import (
    BoundRow,
    BoundTable,
    ReillyReport,
    TaylorExtremum,
    figure1_table,
    hyperbolic_floor,
    momentum_lower_bound,
    reilly_check,
    reilly_report,
    taylor_bound,
    taylor_extremum,
    taylor_remainder,
    uncertainty_product,
)
from app.uncertainty.schwarzschild import (
    PhysicalConstants,
    min_schwarzschild_radius,
    minimum_energy,
    planck_length,
    schwarzschild_geodesic_radius,
    schwarzschild_integral_numeric,
    schwarzschild_momentum_bound,
    schwarzschild_radius,
    schwarzschild_radius_bound,
)

__all__ = [
    "BoundRow",
    "BoundTable",
    "PhysicalConstants",
    "ReillyReport",
    "TaylorExtremum",
    "figure1_table",
    "hyperbolic_floor",
    "min_schwarzschild_radius",
    "minimum_energy",
    "momentum_lower_bound",
    "planck_length",
    "reilly_check",
    "reilly_report",
    "schwarzschild_geodesic_radius",
    "schwarzschild_integral_numeric",
    "schwarzschild_momentum_bound",
    "schwarzschild_radius",
    "schwarzschild_radius_bound",
    "taylor_bound",
    "taylor_extremum",
    "taylor_remainder",
    "uncertainty_product",
]
