"""
Curvature Uncertainty Lab
Dirichlet eigenpairs on geodesic balls of constant-curvature 3-spaces,
an independent shooting oracle, and the momentum uncertainty bounds.
"""

__version__ = "0.1.0"
