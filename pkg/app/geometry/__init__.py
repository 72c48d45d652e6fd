"""
Constant-curvature model-space primitives.
"""

from app.geometry.space import (
    UNBOUNDED,
    CurvatureSpace,
    GeodesicBall,
    RadiusLimit,
    ball_volume,
    log_derivative,
    log_derivative_rule,
    max_radius,
    metric_factor,
    metric_factor_derivative,
    validate_ball,
    volume_weight,
)

__all__ = [
    "UNBOUNDED",
    "CurvatureSpace",
    "GeodesicBall",
    "RadiusLimit",
    "ball_volume",
    "log_derivative",
    "log_derivative_rule",
    "max_radius",
    "metric_factor",
    "metric_factor_derivative",
    "validate_ball",
    "volume_weight",
]
