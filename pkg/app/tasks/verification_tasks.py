"""
Celery tasks for distributed verification and eigenvalue sweeps
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from celery import group

from app.celery_app import celery_app
from app.config import config
from app.errors import CurvatureLabError
from app.verification import CheckResult, execute_check, sweep_row

logger = logging.getLogger(__name__)

BACKENDS = ("local", "celery")


@celery_app.task(bind=True, name="curvature_lab.run_check", queue=config.CELERY_QUEUE_NAME)
def run_check(self, name: str, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Run one verification check.

    Args:
        name: Check name from app.verification.CHECKS
        params: JSON-serialisable check parameters

    Returns:
        dict: CheckResult fields; a library error becomes a failed result
    """
    params = params or {}
    logger.info(f"Running verification check {name} with params {params}")
    try:
        result = execute_check(name, params)
    except CurvatureLabError as e:
        logger.error(f"Verification check {name} raised: {e!s}", exc_info=True)
        result = CheckResult(name=name, label=str(params), passed=False, worst_residual=None, detail=str(e))

    logger.info(f"Check {name} [{result.label}] passed={result.passed} worst={result.worst_residual}")
    return result.to_dict()


@celery_app.task(bind=True, name="curvature_lab.sweep_point", queue=config.CELERY_QUEUE_NAME)
def sweep_point(self, K: float, r0: float, n: int, tol: float, hinted: bool = False) -> Dict[str, Any]:
    """Closed-form vs shooting eigenvalue at one grid point."""
    try:
        row = sweep_row(K, r0, n, tol, hinted=hinted)
        row["error"] = ""
    except CurvatureLabError as e:
        logger.error(f"Sweep point K={K} r0={r0} n={n} failed: {e!s}", exc_info=True)
        row = {"K": K, "r0": r0, "n": n, "lambda": None, "lambda_numeric": None,
               "rel_error": None, "iterations": None, "interior_zeros": None, "error": str(e)}
    return row


def run_tasks(task, arguments: Sequence[Sequence[Any]], backend: str = "local") -> List[Dict[str, Any]]:
    """
    Execute a task for every argument tuple and return results in input order.

    ``local`` calls the task body in-process; ``celery`` dispatches a group to
    the workers and waits for all results.
    """
    if backend not in BACKENDS:
        raise ValueError(f"Unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "local":
        return [task(*args) for args in arguments]

    logger.info(f"Dispatching {len(arguments)} {task.name} tasks to queue {config.CELERY_QUEUE_NAME}")
    job = group(task.s(*args) for args in arguments).apply_async()
    return job.get(timeout=config.VERIFY_TASK_TIMEOUT)
