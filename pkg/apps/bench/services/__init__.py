"""
Benchmark services: metrics, the experiment grid and result tables.
"""

from .config import load_experiment_config
from .grid import GridRunner, run_grid
from .metrics import align_labels_hungarian, misclassification_rate
from .reporting import summarize, write_boxplots, write_results, write_summary

__all__ = [
    "GridRunner",
    "align_labels_hungarian",
    "load_experiment_config",
    "misclassification_rate",
    "run_grid",
    "summarize",
    "write_boxplots",
    "write_results",
    "write_summary",
]
