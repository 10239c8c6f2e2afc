"""
Local development settings for the groupmap project.
"""

from .base import *  # noqa: F401, F403

DEBUG = True

# Run grid cells in-process when the celery executor is selected without a broker
CELERY_TASK_ALWAYS_EAGER = True

LOGGING["loggers"]["apps"]["level"] = "DEBUG"  # noqa: F405
