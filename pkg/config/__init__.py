# Load the celery app with Django so grid cell tasks register on startup
from .celery import app as celery_app

__all__ = ("celery_app",)
