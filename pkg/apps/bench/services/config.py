"""
Experiment configuration files.

A config is a JSON object::

    {
      "grid": [[10, 2], [20, 2], ...],
      "dims": "64x64",
      "data_model": "I",
      "repeats": 10,
      "methods": ["IC", "IIC", "IIV"],
      "inits": ["X01", "X02"],
      "root_seed": 0
    }

Only ``grid`` is required; see :class:`ExperimentConfig` for the other keys.
"""

import json
import logging
from pathlib import Path

from apps.bench.models import ExperimentConfig

logger = logging.getLogger(__name__)


def load_experiment_config(path: Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    config = ExperimentConfig.from_dict(data)
    logger.debug(f"Loaded experiment config from {path}: {len(config.grid)} cells x {config.repeats} repeats")
    return config
