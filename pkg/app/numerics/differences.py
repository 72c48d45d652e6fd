"""
Fourth-order finite differences on uniform grids.

Central five-point stencils in the interior, one-sided stencils of the same
order on the two points nearest each end.
"""

import numpy as np

from app.errors import DomainError

_FIRST_EDGE = (
    np.array([-25.0, 48.0, -36.0, 16.0, -3.0]),
    np.array([-3.0, -10.0, 18.0, -6.0, 1.0]),
)
_SECOND_EDGE = (
    np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]),
    np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]),
)


def _check_grid(values: np.ndarray, h: float) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 6:
        raise DomainError("Finite differences need a 1-d grid with at least 6 points")
    if not h > 0:
        raise DomainError(f"Grid spacing must be positive, got {h!r}")
    return values


def first_derivative(values: np.ndarray, h: float) -> np.ndarray:
    f = _check_grid(values, h)
    out = np.empty_like(f)
    out[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)
    out[0] = np.dot(_FIRST_EDGE[0], f[:5]) / (12.0 * h)
    out[1] = np.dot(_FIRST_EDGE[1], f[:5]) / (12.0 * h)
    # mirrored stencils change sign for odd derivatives
    out[-1] = -np.dot(_FIRST_EDGE[0], f[::-1][:5]) / (12.0 * h)
    out[-2] = -np.dot(_FIRST_EDGE[1], f[::-1][:5]) / (12.0 * h)
    return out


def second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    f = _check_grid(values, h)
    out = np.empty_like(f)
    out[2:-2] = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) / (12.0 * h**2)
    out[0] = np.dot(_SECOND_EDGE[0], f[:6]) / (12.0 * h**2)
    out[1] = np.dot(_SECOND_EDGE[1], f[:6]) / (12.0 * h**2)
    out[-1] = np.dot(_SECOND_EDGE[0], f[::-1][:6]) / (12.0 * h**2)
    out[-2] = np.dot(_SECOND_EDGE[1], f[::-1][:6]) / (12.0 * h**2)
    return out


def count_sign_changes(values: np.ndarray) -> int:
    """Number of strict sign changes, ignoring exact zeros."""
    signs = np.sign(np.asarray(values, dtype=float))
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
