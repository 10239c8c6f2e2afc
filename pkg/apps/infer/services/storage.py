"""
Results directories.

Layout: ``X_est.map``, ``theta.json``, then ``q_<i>.probmap`` and ``elbo.csv``
for variational runs or ``H_<i>.map`` and ``log_posterior.csv`` for coordinate
ascent, plus ``trace/X_iter<k>.map`` for every snapshot taken.
"""

import json
import logging
from pathlib import Path

import tablib

from apps.infer.models import Algorithm, InferenceState
from apps.lattice.services import write_map, write_probmap

logger = logging.getLogger(__name__)


def _write_trace(values: list[float], column: str, path: Path) -> None:
    trace = tablib.Dataset(headers=["iteration", column])
    for iteration, value in enumerate(values, start=1):
        trace.append([iteration, repr(float(value))])
    path.write_text(trace.export("csv", lineterminator="\n"))


def save_result(state: InferenceState, directory: Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_map(state.X, directory / "X_est.map")
    theta = {
        **state.params.to_dict(),
        "algorithm": state.algorithm.value,
        "iterations": state.iteration,
        "converged": state.converged,
    }
    (directory / "theta.json").write_text(json.dumps(theta, indent=2) + "\n")

    if state.algorithm == Algorithm.VB:
        for i, qi in enumerate(state.q.values):
            write_probmap(qi, directory / f"q_{i}.probmap")
        _write_trace(state.elbo_trace, "F", directory / "elbo.csv")
    else:
        for i, mask in enumerate(state.masks):
            write_map(mask, directory / f"H_{i}.map")
        _write_trace(state.log_posterior_trace, "log_posterior", directory / "log_posterior.csv")

    if state.snapshots:
        (directory / "trace").mkdir(exist_ok=True)
        for iteration, X in state.snapshots:
            write_map(X, directory / "trace" / f"X_iter{iteration}.map")

    logger.info(f"Saved {state.algorithm.label} result to {directory}")
    return directory
