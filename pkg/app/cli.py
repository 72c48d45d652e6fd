"""
Command-line front end: `curvature-lab <command> [options]`.

Every command builds a Report and writes it as CSV or JSON to stdout or
``--output``. Exit codes: 0 success, 1 numerical or verification failure,
2 usage or domain error.
"""

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from celery.exceptions import TimeoutError as CeleryTimeoutError
from kombu.exceptions import OperationalError

from app import __version__
from app.config import config as app_config
from app.errors import ConvergenceError, DomainError
from app.geometry import CurvatureSpace, GeodesicBall, ball_volume, max_radius, metric_factor, volume_weight
from app.numerics import (
    momentum_stddev,
    radial_laplacian_expectation,
    random_trial_function,
    rayleigh_quotient,
    solve_eigenvalue_numeric,
    weighted_norm_squared,
)
from app.reporting import FORMATS, Report
from app.spectra import eigenfunction, eigenvalue
from app.tasks import run_check, run_tasks, sweep_point
from app.tasks.verification_tasks import BACKENDS
from app.uncertainty import (
    PhysicalConstants,
    figure1_table,
    min_schwarzschild_radius,
    momentum_lower_bound,
    planck_length,
    schwarzschild_geodesic_radius,
    schwarzschild_integral_numeric,
    schwarzschild_momentum_bound,
    schwarzschild_radius_bound,
)
from app.verification import CheckResult, default_plan, grid_radii

logger = logging.getLogger(__name__)

TOOL_NAME = "curvature-lab"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

BOUND_COLUMNS = ("K", "r", "sigma_p_min", "product")
SWEEP_COLUMNS = ("K", "r0", "n", "lambda", "lambda_numeric", "rel_error", "iterations", "interior_zeros", "error")
TRIAL_RATIO_SLACK = 1e-9


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line of a single invocation."""

    command: str
    K: Tuple[float, ...] = (0.0,)
    r0: Optional[float] = None
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    steps: int = 200
    n: int = 1
    modes: int = 3
    seed: Optional[int] = None
    trials: int = 1000
    degree: int = 6
    count: int = 1
    r_s: float = 1.0
    tolerance: float = 1e-8
    hinted: bool = False
    backend: str = "local"
    format: str = "csv"
    hbar_mode: str = "natural"
    output: Optional[str] = None
    log_level: Optional[str] = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        values = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        if isinstance(values.get("K"), float):
            values["K"] = (values["K"],)
        return cls(**values)

    def echo(self) -> Dict[str, object]:
        """Config as written into JSON metadata; output location and logging are left out."""
        payload = asdict(self)
        payload.pop("output")
        payload.pop("log_level")
        payload["K"] = list(self.K)
        return payload

    @property
    def hbar(self) -> float:
        return PhysicalConstants.for_mode(self.hbar_mode).hbar


def _metadata(run: RunConfig, **extra: object) -> Dict[str, object]:
    return {"tool": TOOL_NAME, "version": __version__, "config": run.echo(), **extra}


def _single_ball(run: RunConfig) -> GeodesicBall:
    if len(run.K) != 1:
        raise DomainError(f"Command {run.command!r} takes a single curvature, got {list(run.K)}")
    return GeodesicBall(CurvatureSpace(run.K[0]), run.r0)


def _check_tolerance(tolerance: float) -> None:
    if not (math.isfinite(tolerance) and tolerance > 0):
        raise DomainError(f"Tolerance must be positive, got {tolerance!r}")


def cmd_eigen(run: RunConfig) -> Tuple[Report, bool]:
    """Closed-form eigenvalue against the shooting oracle, plus the normalization integral."""
    _check_tolerance(run.tolerance)
    ball = _single_ball(run)
    exact = eigenvalue(ball, run.n)
    result = solve_eigenvalue_numeric(ball, run.n, tol=run.tolerance * 1e-2)
    rel_error = abs(result.lambda_hat - exact) / exact
    norm = weighted_norm_squared(eigenfunction(ball, run.n), ball)

    report = Report(
        columns=("K", "r0", "n", "lambda", "lambda_numeric", "rel_error", "norm_integral", "norm_error"),
        metadata=_metadata(run, iterations=result.iterations, boundary_residual=result.boundary_residual),
    )
    report.add_row(
        K=ball.K,
        r0=ball.r0,
        n=run.n,
        **{"lambda": exact},
        lambda_numeric=result.lambda_hat,
        rel_error=rel_error,
        norm_integral=norm,
        norm_error=abs(norm - 1.0),
    )
    passed = rel_error <= run.tolerance and abs(norm - 1.0) <= run.tolerance
    if not passed:
        logger.warning(f"Eigen check above tolerance {run.tolerance}: rel_error={rel_error:.3e}, norm={norm!r}")
    return report, passed


def cmd_bound(run: RunConfig) -> Tuple[Report, bool]:
    table = figure1_table(run.K, run.r_min, run.r_max, run.steps, hbar=run.hbar)
    report = Report(
        columns=BOUND_COLUMNS,
        metadata=_metadata(
            run,
            hbar=table.hbar,
            asymptotes={f"{K:.12g}": value for K, value in table.asymptotes.items()},
            equators={f"{K:.12g}": value for K, value in table.equators.items()},
        ),
    )
    for row in table.rows:
        report.add_row(K=row.K, r=row.r, sigma_p_min=row.sigma_p_min, product=row.product)
    return report, True


def cmd_volume(run: RunConfig) -> Tuple[Report, bool]:
    """s_K, w and V over an r-range; on the sphere the range is clipped at the antipode."""
    if run.steps < 1:
        raise DomainError(f"steps must be a positive integer, got {run.steps!r}")
    if not (math.isfinite(run.r_min) and math.isfinite(run.r_max) and 0 <= run.r_min <= run.r_max):
        raise DomainError(f"Empty radius range ({run.r_min!r}, {run.r_max!r})")

    report = Report(columns=("K", "r", "metric_factor", "volume_weight", "ball_volume"), metadata=_metadata(run))
    for K in run.K:
        space = CurvatureSpace(K)
        limit = max_radius(space)
        upper = min(run.r_max, limit.value) if limit.bounded else run.r_max
        if upper < run.r_min:
            raise DomainError(f"Radius range ({run.r_min!r}, {run.r_max!r}) is empty for K = {K!r} ({limit})")
        radii = np.linspace(run.r_min, upper, run.steps) if run.steps > 1 else np.array([run.r_min])
        s = metric_factor(space, radii)
        w = volume_weight(space, radii)
        V = ball_volume(space, radii)
        for i, r in enumerate(radii):
            report.add_row(K=K, r=float(r), metric_factor=float(s[i]), volume_weight=float(w[i]), ball_volume=float(V[i]))
    return report, True


def cmd_verify(run: RunConfig) -> Tuple[Report, bool]:
    _check_tolerance(run.tolerance)
    plan = default_plan(tolerance=run.tolerance, seed=run.seed if run.seed is not None else 42, trials=run.trials)
    results = [CheckResult.from_dict(payload) for payload in run_tasks(run_check, plan, run.backend)]

    passed = all(result.passed for result in results)
    report = Report(
        columns=("check", "label", "passed", "worst_residual", "detail"),
        metadata=_metadata(run, passed=passed, failed=[r.name for r in results if not r.passed]),
    )
    for result in results:
        report.add_row(
            check=result.name,
            label=result.label,
            passed=result.passed,
            worst_residual=result.worst_residual,
            detail=result.detail,
        )
    logger.info(f"Verification finished: {sum(r.passed for r in results)}/{len(results)} checks passed")
    return report, passed


def cmd_trial(run: RunConfig) -> Tuple[Report, bool]:
    """Seeded trial states against the ground state: Rayleigh quotient, ratio to lambda_1, both sigma_p forms."""
    if run.count < 1:
        raise DomainError(f"count must be a positive integer, got {run.count!r}")
    ball = _single_ball(run)
    hbar = run.hbar
    lambda_1 = eigenvalue(ball, 1)
    floor = momentum_lower_bound(ball, hbar)

    report = Report(
        columns=("seed", "rayleigh", "lambda_1", "ratio", "sigma_p", "sigma_p_laplacian", "sigma_p_min"),
        metadata=_metadata(run, hbar=hbar),
    )
    passed = True
    for seed in range(run.seed, run.seed + run.count):
        psi = random_trial_function(ball, seed=seed, degree=run.degree)
        rayleigh = rayleigh_quotient(psi, ball)
        ratio = rayleigh / lambda_1
        passed = passed and ratio >= 1.0 - TRIAL_RATIO_SLACK
        report.add_row(
            seed=seed,
            rayleigh=rayleigh,
            lambda_1=lambda_1,
            ratio=ratio,
            sigma_p=momentum_stddev(psi, ball, hbar=hbar),
            sigma_p_laplacian=math.sqrt(radial_laplacian_expectation(psi, ball, hbar=hbar)),
            sigma_p_min=floor,
        )
    return report, passed


def cmd_schwarzschild(run: RunConfig) -> Tuple[Report, bool]:
    constants = PhysicalConstants.for_mode(run.hbar_mode)
    r_s = run.r_s
    closed_form = schwarzschild_geodesic_radius(r_s)
    numeric = schwarzschild_integral_numeric(r_s)
    rel_error = abs(numeric / closed_form - 1.0)
    sigma_p_min = schwarzschild_momentum_bound(r_s, constants.hbar)
    radius_floor = schwarzschild_radius_bound(sigma_p_min, constants)

    report = Report(
        columns=("quantity", "value"),
        metadata=_metadata(run, units="SI" if run.hbar_mode == "si" else "natural"),
    )
    for quantity, value in (
        ("hbar", constants.hbar),
        ("G", constants.G),
        ("c", constants.c),
        ("planck_length", planck_length(constants)),
        ("min_schwarzschild_radius", min_schwarzschild_radius(constants)),
        ("r_s", r_s),
        ("sigma_p_min", sigma_p_min),
        ("r_s_lower_bound", radius_floor),
        ("self_consistent", r_s >= radius_floor),
        ("geodesic_radius", closed_form),
        ("geodesic_radius_numeric", numeric),
        ("geodesic_radius_rel_error", rel_error),
    ):
        report.add_row(quantity=quantity, value=value)
    return report, rel_error < 1e-6


def cmd_sweep(run: RunConfig) -> Tuple[Report, bool]:
    """Shooting vs closed form over the admissible radius grid of each curvature."""
    _check_tolerance(run.tolerance)
    if run.modes < 1:
        raise DomainError(f"modes must be a positive integer, got {run.modes!r}")
    arguments = [
        (K, r0, n, run.tolerance * 1e-2, run.hinted)
        for K in run.K
        for r0 in grid_radii(K)
        for n in range(1, run.modes + 1)
    ]
    rows = run_tasks(sweep_point, arguments, run.backend)

    failures = [row for row in rows if row["error"] or row["rel_error"] > run.tolerance]
    report = Report(columns=SWEEP_COLUMNS, metadata=_metadata(run, points=len(rows), failures=len(failures)))
    for row in rows:
        report.add_row(**row)
    return report, not failures


COMMANDS: Dict[str, Callable[[RunConfig], Tuple[Report, bool]]] = {
    "eigen": cmd_eigen,
    "bound": cmd_bound,
    "volume": cmd_volume,
    "verify": cmd_verify,
    "trial": cmd_trial,
    "schwarzschild": cmd_schwarzschild,
    "sweep": cmd_sweep,
}


def _curvature_list(text: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid curvature list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("at least one curvature is required")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="csv", help="Output format (default: csv)")
    common.add_argument("--output", "-o", help="Output file path (default: stdout)")
    common.add_argument("--hbar-mode", choices=("natural", "si"), default="natural", help="Units of hbar, G and c")
    common.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
        help=f"Log level on stderr (default: {app_config.LOG_LEVEL})",
    )

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend", choices=BACKENDS, default="local", help="Run checks in-process or on Celery workers")

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Uncertainty bounds on constant-curvature 3-manifolds")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    eigen = subparsers.add_parser("eigen", parents=[common], help="Closed-form vs numerical Dirichlet eigenvalue")
    eigen.add_argument("--K", type=float, default=0.0, help="Sectional curvature")
    eigen.add_argument("--r0", type=float, required=True, help="Geodesic radius of the ball")
    eigen.add_argument("--n", type=int, default=1, help="Mode index (default: 1)")
    eigen.add_argument("--tolerance", type=float, default=1e-8, help="Relative agreement required (default: 1e-8)")

    bound = subparsers.add_parser("bound", parents=[common], help="Momentum bound against geodesic radius")
    bound.add_argument("--K", type=_curvature_list, default=(1.0, 0.0, -1.0), help="Comma-separated curvatures, e.g. --K=1,0,-1")
    bound.add_argument("--r-min", type=float, default=0.05, help="Smallest radius (default: 0.05)")
    bound.add_argument("--r-max", type=float, default=math.pi, help="Largest radius (default: pi)")
    bound.add_argument("--steps", type=int, default=200, help="Radii per curve (default: 200)")

    volume = subparsers.add_parser("volume", parents=[common], help="Metric factor, volume weight and ball volume")
    volume.add_argument("--K", type=_curvature_list, default=(1.0, 0.0, -1.0), help="Comma-separated curvatures")
    volume.add_argument("--r-min", type=float, default=0.0, help="Smallest radius (default: 0)")
    volume.add_argument("--r-max", type=float, default=math.pi, help="Largest radius (default: pi)")
    volume.add_argument("--steps", type=int, default=50, help="Radii per curvature (default: 50)")

    verify = subparsers.add_parser("verify", parents=[common, backend], help="Run the invariant suite")
    verify.add_argument("--tolerance", type=float, default=1e-8, help="Oracle/sharpness tolerance (default: 1e-8)")
    verify.add_argument("--seed", type=int, default=42, help="Seed of the variational suite (default: 42)")
    verify.add_argument("--trials", type=int, default=1000, help="Trial states per configuration (default: 1000)")

    trial = subparsers.add_parser("trial", parents=[common], help="Seeded trial states against the ground state")
    trial.add_argument("--K", type=float, default=0.0, help="Sectional curvature")
    trial.add_argument("--r0", type=float, required=True, help="Geodesic radius of the ball")
    trial.add_argument("--seed", type=int, required=True, help="Seed of the first trial state")
    trial.add_argument("--degree", type=int, default=6, help="Polynomial degree (default: 6)")
    trial.add_argument("--count", type=int, default=1, help="Number of consecutive seeds (default: 1)")

    schwarzschild = subparsers.add_parser("schwarzschild", parents=[common], help="Planck-scale bound on r_s")
    schwarzschild.add_argument("--r-s", type=float, default=1.0, help="Schwarzschild radius (default: 1)")

    sweep = subparsers.add_parser("sweep", parents=[common, backend], help="Shooting oracle over the radius grid")
    sweep.add_argument("--K", type=_curvature_list, default=(-4.0, -1.0, 0.0, 1.0, 4.0), help="Comma-separated curvatures")
    sweep.add_argument("--modes", type=int, default=3, help="Modes per radius (default: 3)")
    sweep.add_argument("--tolerance", type=float, default=1e-8, help="Relative agreement required (default: 1e-8)")
    sweep.add_argument("--hinted", action="store_true", help="Bracket around the closed form instead of scanning")

    return parser


def _write(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="")
        logger.info(f"Wrote {len(text)} characters to {output}")
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=(args.log_level or app_config.LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    run = RunConfig.from_namespace(args)
    logger.debug(f"Running {run.command} with {run.echo()}")

    try:
        report, passed = COMMANDS[run.command](run)
        _write(report.render(run.format), run.output)
    except DomainError as e:
        logger.error(f"{run.command}: {e!s}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as e:
        logger.error(f"{run.command}: {e!s}")
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (CeleryTimeoutError, OperationalError) as e:
        logger.error(f"{run.command}: Celery backend unavailable: {e!s}", exc_info=True)
        print(f"backend failure: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"error: cannot write {run.output}: {e}", file=sys.stderr)
        return EXIT_USAGE

    return EXIT_OK if passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
