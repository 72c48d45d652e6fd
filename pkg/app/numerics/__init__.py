"""
Independent numerical oracle: quadrature, Rayleigh quotients, shooting.
"""

from app.numerics.differences import count_sign_changes, first_derivative, second_derivative
from app.numerics.quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    composite_nodes,
    gauss_legendre,
    integrate_weighted,
    weighted_inner_product,
    weighted_norm_squared,
)
from app.numerics.shooting import (
    RadialShooter,
    ShootingResult,
    regular_series_start,
    solve_eigenvalue_numeric,
)
from app.numerics.variational import (
    momentum_stddev,
    radial_laplacian_expectation,
    random_trial_function,
    rayleigh_quotient,
    variational_ratio,
)

__all__ = [
    "DEFAULT_QUADRATURE",
    "QuadratureSpec",
    "RadialShooter",
    "ShootingResult",
    "composite_nodes",
    "count_sign_changes",
    "first_derivative",
    "gauss_legendre",
    "integrate_weighted",
    "momentum_stddev",
    "radial_laplacian_expectation",
    "random_trial_function",
    "rayleigh_quotient",
    "regular_series_start",
    "second_derivative",
    "solve_eigenvalue_numeric",
    "variational_ratio",
    "weighted_inner_product",
    "weighted_norm_squared",
]
