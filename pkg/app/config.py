"""
Configuration module for the application.
Loads operational settings from environment variables.

Numerical results never depend on these settings; they only control
log verbosity and where the distributed verification backend connects.
"""

import os

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Config:
    """Application configuration class"""

    # Celery Configuration
    CELERY_BROKER_URL = os.getenv("CELERY_BROKER_URL", "redis://localhost:6379/0")
    CELERY_RESULT_BACKEND = os.getenv("CELERY_RESULT_BACKEND", "redis://localhost:6379/1")
    CELERY_QUEUE_NAME = os.getenv("CELERY_QUEUE_NAME", "verification")

    # Application Configuration
    APP_NAME = os.getenv("APP_NAME", "Curvature-Uncertainty-Lab")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")

    # Seconds to wait for a dispatched verification group
    VERIFY_TASK_TIMEOUT = int(os.getenv("VERIFY_TASK_TIMEOUT", "600"))


config = Config()
