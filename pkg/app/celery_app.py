"""
Celery worker entry point for distributed verification.

Workers evaluate verification checks and sweep points so that the
parameter grids of `curvature-lab verify --backend celery` run in parallel.
Each task is CPU bound and independent of the others.
"""

import os
import sys

if __name__ == "__main__":
    project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
    if project_root not in sys.path:
        sys.path.insert(0, project_root)

from celery import Celery

from app.config import config

celery_app = Celery(
    config.APP_NAME,
    broker=config.CELERY_BROKER_URL,
    backend=config.CELERY_RESULT_BACKEND,
    include=["app.tasks.verification_tasks"],
)

celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_default_queue=config.CELERY_QUEUE_NAME,
    # Soft limit matches the client-side group timeout
    task_soft_time_limit=config.VERIFY_TASK_TIMEOUT,
    task_time_limit=config.VERIFY_TASK_TIMEOUT + 60,
    worker_prefetch_multiplier=1,
    task_acks_late=True,
    result_expires=24 * 60 * 60,
)

# Prefork is unavailable on Windows
if sys.platform == "win32":
    celery_app.conf.worker_pool = "solo"

if __name__ == "__main__":
    args = sys.argv[1:] or ["worker", "-l", "info", "-Q", config.CELERY_QUEUE_NAME]
    celery_app.start(args)
