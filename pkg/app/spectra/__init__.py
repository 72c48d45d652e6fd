"""
Closed-form Dirichlet spectra on geodesic balls.
"""

from app.spectra.eigen import (
    EigenPair,
    eigenfunction,
    eigenfunction_derivative,
    eigenfunction_value,
    eigenpair,
    eigenvalue,
    normalization_constant,
    spectrum,
)
from app.spectra.radial import RadialFunction

__all__ = [
    "EigenPair",
    "RadialFunction",
    "eigenfunction",
    "eigenfunction_derivative",
    "eigenfunction_value",
    "eigenpair",
    "eigenvalue",
    "normalization_constant",
    "spectrum",
]
