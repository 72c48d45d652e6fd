"""
Composite Gauss-Legendre quadrature and radially weighted integrals.
"""

import logging
import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

from app.errors import QuadratureSpecError
from app.geometry import GeodesicBall, volume_weight

logger = logging.getLogger(__name__)

SCHEME = "gauss-legendre-composite"
MIN_NODE_COUNT = 16


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Composite Gauss-Legendre rule.

    ``node_count`` nodes are spread over ``node_count // nodes_per_panel`` equal
    panels; the rule is exact for polynomials of degree 2*nodes_per_panel - 1 on
    each panel, so its order is 2*nodes_per_panel.
    """

    node_count: int = 64
    nodes_per_panel: int = 8
    scheme: str = SCHEME

    def __post_init__(self):
        for name in ("node_count", "nodes_per_panel"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise QuadratureSpecError(f"{name} must be an integer, got {value!r}")
        if self.node_count < MIN_NODE_COUNT:
            raise QuadratureSpecError(f"node_count must be >= {MIN_NODE_COUNT}, got {self.node_count}")
        if self.nodes_per_panel < 1 or self.node_count % self.nodes_per_panel:
            raise QuadratureSpecError(
                f"node_count {self.node_count} is not a multiple of nodes_per_panel {self.nodes_per_panel}"
            )
        if self.scheme != SCHEME:
            raise QuadratureSpecError(f"Unsupported quadrature scheme {self.scheme!r}")

    @property
    def panels(self) -> int:
        return self.node_count // self.nodes_per_panel

    @property
    def order(self) -> int:
        return 2 * self.nodes_per_panel


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=None)
def cached_leggauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_nodes(a: float, b: float, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on [a, b]."""
    x, w = cached_leggauss(quad.nodes_per_panel)
    edges = np.linspace(a, b, quad.panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integral of a vectorised f over [a, b]."""
    nodes, weights = composite_nodes(a, b, quad)
    return float(np.dot(weights, np.asarray(f(nodes), dtype=float)))


def integrate_weighted(
    g: Callable[[np.ndarray], np.ndarray],
    ball: GeodesicBall,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    Integral of g(r) w(r) over [0, r0], w being the radial volume weight.

    Args:
        g: Vectorised integrand (for a state psi pass psi**2, see weighted_norm_squared)
        ball: Integration domain
        quad: Quadrature rule

    Returns:
        Approximation of the weighted integral (units of g times length^3)
    """
    nodes, weights = composite_nodes(0.0, ball.r0, quad)
    values = np.asarray(g(nodes), dtype=float) * volume_weight(ball.space, nodes)
    return float(np.dot(weights, values))


def weighted_inner_product(f, g, ball: GeodesicBall, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """<f, g>_w over the ball."""
    return integrate_weighted(lambda r: f(r) * g(r), ball, quad)


def weighted_norm_squared(f, ball: GeodesicBall, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    return integrate_weighted(lambda r: np.asarray(f(r)) ** 2, ball, quad)
