"""
Tasks module initialization
"""

from app.tasks.verification_tasks import run_check, run_tasks, sweep_point

__all__ = [
    "run_check",
    "run_tasks",
    "sweep_point",
]
