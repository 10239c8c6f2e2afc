"""
Celery tasks for the benchmark grid.
"""

import logging

from celery import shared_task

logger = logging.getLogger(__name__)


@shared_task
def run_grid_cell(payload: dict) -> list[dict]:
    """
    Run one (M, K, repeat) cell of an experiment.

    Args:
        payload: {"config": ExperimentConfig.to_dict(), "M": int, "K": int, "repeat": int}

    Returns:
        The cell's result rows as dicts, in method x init order.
    """
    from apps.bench.models import ExperimentConfig
    from apps.bench.services.grid import GridRunner

    config = ExperimentConfig.from_dict(payload["config"])
    logger.info(f"Running grid cell M={payload['M']} K={payload['K']} repeat={payload['repeat']}")
    rows = GridRunner(config).run_cell(payload["M"], payload["K"], payload["repeat"])
    return [row.to_dict() for row in rows]
