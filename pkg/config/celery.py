"""
Celery configuration for the groupmap project.

Grid cells of the benchmark harness are dispatched as tasks; start a worker with
``celery -A config worker -Q grid`` and set GROUPMAP_BENCH_EXECUTOR=celery.
"""

import os

from celery import Celery

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")

app = Celery("groupmap")
app.config_from_object("django.conf:settings", namespace="CELERY")
app.autodiscover_tasks()

# Task routing
app.conf.task_routes = {
    "apps.bench.tasks.run_grid_cell": {"queue": "grid"},
}
