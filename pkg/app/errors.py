"""
Exception types raised by the library.
"""


class CurvatureLabError(Exception):
    """Base class for all library errors."""


class DomainError(CurvatureLabError, ValueError):
    """An argument lies outside the admissible domain (curvature, radius, mode, range)."""


class QuadratureSpecError(DomainError):
    """A quadrature rule was requested with an invalid node layout."""


class ConvergenceError(CurvatureLabError, RuntimeError):
    """An iterative numerical procedure did not reach its tolerance."""
