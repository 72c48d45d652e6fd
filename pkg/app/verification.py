"""
Invariant checks run by `curvature-lab verify`.

Each check takes a JSON-serialisable parameter dict and returns a CheckResult,
so the same plan can run in-process or as Celery tasks.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.errors import DomainError
from app.geometry import CurvatureSpace, GeodesicBall, ball_volume, max_radius, volume_weight
from app.numerics import (
    rayleigh_quotient,
    random_trial_function,
    solve_eigenvalue_numeric,
    weighted_inner_product,
)
from app.spectra import eigenfunction, eigenvalue
from app.uncertainty import (
    hyperbolic_floor,
    momentum_lower_bound,
    reilly_report,
    schwarzschild_geodesic_radius,
    schwarzschild_integral_numeric,
    taylor_extremum,
    taylor_remainder,
    uncertainty_product,
)

logger = logging.getLogger(__name__)

GRID_CURVATURES = (-4.0, -1.0, 0.0, 1.0, 4.0)
GRID_MODES = (1, 2, 3)
SPHERE_FRACTIONS = (0.2, 0.35, 0.5, 0.65, 0.8)
OPEN_RADII = (0.25, 0.5, 1.0, 2.0, 3.0)
VARIATIONAL_CONFIGS = (
    (-4.0, 0.5), (-4.0, 1.5), (-1.0, 1.0), (-1.0, 2.0), (0.0, 0.5),
    (0.0, 1.0), (1.0, math.pi / 4), (1.0, math.pi / 2), (4.0, 0.3), (4.0, 0.7),
)
VARIATIONAL_SLACK = 1e-9
TRIAL_DEGREE = 6
ORTHOGONALITY_MODES = 5
SCHWARZSCHILD_RADII = (1e-3, 1.0, 1e3)
SCHWARZSCHILD_TOLERANCE = 1e-6
REILLY_SAMPLES = 50


@dataclass(frozen=True)
class CheckResult:
    name: str
    label: str
    passed: bool
    worst_residual: Optional[float]
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "CheckResult":
        return cls(**payload)


def grid_radii(K: float) -> Tuple[float, ...]:
    """Five admissible test radii for a curvature."""
    limit = max_radius(CurvatureSpace(K))
    if limit.bounded:
        return tuple(f * limit.value for f in SPHERE_FRACTIONS)
    scale = 1.0 if K == 0 else 1.0 / math.sqrt(-K)
    return tuple(r * scale for r in OPEN_RADII)


def grid_balls() -> List[GeodesicBall]:
    return [GeodesicBall(CurvatureSpace(K), r0) for K in GRID_CURVATURES for r0 in grid_radii(K)]


def sweep_row(K: float, r0: float, n: int, tol: float, hinted: bool = False) -> Dict[str, Any]:
    """Closed-form and shooting eigenvalue for one grid point."""
    ball = GeodesicBall(CurvatureSpace(K), r0)
    exact = eigenvalue(ball, n)
    result = solve_eigenvalue_numeric(ball, n, tol, hinted=hinted)
    return {
        "K": K,
        "r0": r0,
        "n": n,
        "lambda": exact,
        "lambda_numeric": result.lambda_hat,
        "rel_error": abs(result.lambda_hat - exact) / exact,
        "iterations": result.iterations,
        "interior_zeros": result.interior_zeros,
    }


def check_oracle_agreement(params: Dict[str, Any]) -> CheckResult:
    K = float(params["K"])
    tolerance = float(params.get("tolerance", 1e-8))
    worst = 0.0
    for r0 in grid_radii(K):
        for n in GRID_MODES:
            row = sweep_row(K, r0, n, tol=tolerance * 1e-2)
            if row["interior_zeros"] != n - 1:
                return CheckResult("oracle_agreement", f"K={K:g}", False, row["rel_error"],
                                   f"mode {n} at r0={r0:.6g} has {row['interior_zeros']} interior zeros")
            worst = max(worst, row["rel_error"])
    return CheckResult("oracle_agreement", f"K={K:g}", worst < tolerance, worst,
                       f"{len(grid_radii(K)) * len(GRID_MODES)} shooting solves")


def check_sharpness(params: Dict[str, Any]) -> CheckResult:
    tolerance = float(params.get("tolerance", 1e-8))
    worst = 0.0
    for ball in grid_balls():
        lambda_1 = eigenvalue(ball, 1)
        worst = max(worst, abs(rayleigh_quotient(eigenfunction(ball, 1), ball) / lambda_1 - 1.0))
    return CheckResult("sharpness", "Rayleigh(F_1) = lambda_1", worst < tolerance, worst)


def check_orthonormality(params: Dict[str, Any]) -> CheckResult:
    tolerance = float(params.get("tolerance", 1e-8))
    worst = 0.0
    for ball in grid_balls():
        modes = [eigenfunction(ball, n) for n in range(1, ORTHOGONALITY_MODES + 1)]
        for i, f in enumerate(modes):
            for j, g in enumerate(modes[i:], start=i):
                expected = 1.0 if i == j else 0.0
                worst = max(worst, abs(weighted_inner_product(f, g, ball) - expected))
    return CheckResult("orthonormality", f"<F_m, F_n>_w, m,n <= {ORTHOGONALITY_MODES}", worst < tolerance, worst)


def check_variational(params: Dict[str, Any]) -> CheckResult:
    seed = int(params.get("seed", 42))
    trials = int(params.get("trials", 1000))
    min_ratio = math.inf
    for index, (K, r0) in enumerate(VARIATIONAL_CONFIGS):
        ball = GeodesicBall(CurvatureSpace(K), r0)
        lambda_1 = eigenvalue(ball, 1)
        for trial in range(trials):
            psi = random_trial_function(ball, seed=seed * 1_000_003 + index * trials + trial, degree=TRIAL_DEGREE)
            min_ratio = min(min_ratio, rayleigh_quotient(psi, ball) / lambda_1)
    passed = min_ratio >= 1.0 - VARIATIONAL_SLACK
    return CheckResult("variational", f"seed={seed}, trials={trials}", passed, max(0.0, 1.0 - min_ratio),
                       f"min Rayleigh/lambda_1 = {min_ratio:.12g} over {len(VARIATIONAL_CONFIGS)} configurations")


def check_reilly(params: Dict[str, Any]) -> CheckResult:
    seed = int(params.get("seed", 42))
    space = CurvatureSpace(1.0)
    hemisphere = math.pi / 2.0
    rng = np.random.default_rng(seed)
    radii = list(hemisphere * (1.0 - rng.uniform(0.0, 1.0, size=REILLY_SAMPLES - 1))) + [hemisphere]
    reports = [reilly_report(GeodesicBall(space, float(r0))) for r0 in radii]
    equality = reports[-1]
    interior_ok = all(rep.satisfied and not rep.saturated for rep in reports[:-1] if rep.r0 < hemisphere)
    passed = interior_ok and equality.saturated and all(rep.hypothesis_holds for rep in reports)
    return CheckResult("reilly", "K=1, r0 in (0, pi/2]", passed, abs(equality.lambda_1 - equality.reilly_bound),
                       f"min lambda_1 - 3K = {min(rep.lambda_1 - rep.reilly_bound for rep in reports):.12g}")


def check_schwarzschild(params: Dict[str, Any]) -> CheckResult:
    worst = 0.0
    for r_s in SCHWARZSCHILD_RADII:
        numeric = schwarzschild_integral_numeric(r_s)
        worst = max(worst, abs(numeric / schwarzschild_geodesic_radius(r_s) - 1.0))
    return CheckResult("schwarzschild", "integral = pi r_s / 2", worst < SCHWARZSCHILD_TOLERANCE, worst)


def check_volumes(params: Dict[str, Any]) -> CheckResult:
    sphere = CurvatureSpace(1.0)
    closure = abs(ball_volume(sphere, math.pi) / (2.0 * math.pi**2) - 1.0)
    derivative_error = 0.0
    small_error = 0.0
    for K in GRID_CURVATURES:
        space = CurvatureSpace(K)
        for r in grid_radii(K):
            h = 1e-5 * r
            slope = (ball_volume(space, r + h) - ball_volume(space, r - h)) / (2.0 * h)
            derivative_error = max(derivative_error, abs(slope / (4.0 * math.pi * volume_weight(space, r)) - 1.0))
        if K != 0:
            r = 1e-3 / math.sqrt(abs(K))
            small_error = max(small_error, abs(ball_volume(space, r) / (4.0 * math.pi * r**3 / 3.0) - 1.0))
    passed = closure < 1e-12 and derivative_error < 1e-6 and small_error < 1e-6
    return CheckResult("volumes", "V+(pi), dV/dr, small-r", passed, max(closure, derivative_error, small_error),
                       f"closure={closure:.3g}, dV/dr={derivative_error:.3g}, small-r={small_error:.3g}")


def check_bound_limits(params: Dict[str, Any]) -> CheckResult:
    hyperbolic = CurvatureSpace(-1.0)
    gap = momentum_lower_bound(GeodesicBall(hyperbolic, 1e3)) - hyperbolic_floor(hyperbolic)
    closure = momentum_lower_bound(GeodesicBall(CurvatureSpace(1.0), math.pi * (1.0 - 1e-8)))
    flat = CurvatureSpace(0.0)
    flat_exact = all(uncertainty_product(GeodesicBall(flat, r0)) == math.pi for r0 in np.geomspace(1e-3, 1e3, 20))
    passed = 0.0 < gap < 5e-6 and closure < 1e-3 and flat_exact
    return CheckResult("bound_limits", "floor, closure, flat product", passed, gap,
                       f"floor gap={gap:.6g}, spherical closure={closure:.6g}, flat product exact={flat_exact}")


def check_taylor(params: Dict[str, Any]) -> CheckResult:
    worst_slope = 0.0
    for K in (-1.0, 1.0, -4.0, 4.0):
        space = CurvatureSpace(K)
        radii = np.geomspace(1e-3, 1e-1, 25) / math.sqrt(abs(K))
        errors = [abs(taylor_remainder(GeodesicBall(space, r)) / momentum_lower_bound(GeodesicBall(space, r)))
                  for r in radii]
        slope = np.polyfit(np.log(radii), np.log(errors), 1)[0]
        worst_slope = max(worst_slope, abs(slope - 4.0))

    K = -1.0
    a = math.sqrt(-K)
    search = minimize_scalar(
        lambda r: math.pi * (1.0 / r - K * r / (2.0 * math.pi**2)),
        bracket=(0.1 / a, 1.0 / a, 100.0 / a),
        method="golden",
    )
    expected = taylor_extremum(CurvatureSpace(K)).radius
    minimiser_error = abs(search.x / expected - 1.0)
    passed = worst_slope < 0.1 and minimiser_error < 1e-6
    return CheckResult("taylor", "r^4 remainder law, minimiser", passed, max(worst_slope, minimiser_error),
                       f"|slope-4|={worst_slope:.3g}, minimiser error={minimiser_error:.3g}")


CHECKS: Dict[str, Callable[[Dict[str, Any]], CheckResult]] = {
    "oracle_agreement": check_oracle_agreement,
    "sharpness": check_sharpness,
    "orthonormality": check_orthonormality,
    "variational": check_variational,
    "reilly": check_reilly,
    "schwarzschild": check_schwarzschild,
    "volumes": check_volumes,
    "bound_limits": check_bound_limits,
    "taylor": check_taylor,
}


def execute_check(name: str, params: Dict[str, Any]) -> CheckResult:
    if name not in CHECKS:
        raise DomainError(f"Unknown verification check {name!r}")
    return CHECKS[name](params)


def default_plan(tolerance: float = 1e-8, seed: int = 42, trials: int = 1000) -> List[Tuple[str, Dict[str, Any]]]:
    """Ordered (check, params) pairs; the oracle grid is split by curvature."""
    plan: List[Tuple[str, Dict[str, Any]]] = [
        ("oracle_agreement", {"K": K, "tolerance": tolerance}) for K in GRID_CURVATURES
    ]
    plan += [
        ("sharpness", {"tolerance": tolerance}),
        ("orthonormality", {"tolerance": tolerance}),
        ("variational", {"seed": seed, "trials": trials}),
        ("reilly", {"seed": seed}),
        ("schwarzschild", {}),
        ("volumes", {}),
        ("bound_limits", {}),
        ("taylor", {}),
    ]
    return plan
