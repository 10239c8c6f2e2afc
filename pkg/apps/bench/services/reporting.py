"""
Result tables: per-run rows, per-group summaries and boxplot inputs.

Quantiles use linear interpolation between order statistics (numpy's default
``linear`` method), so rates 0.1, ..., 1.0 have quartiles 0.325 and 0.775.
"""

import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import tablib

from apps.bench.models import RESULT_COLUMNS, ResultRow, RowStatus, SummaryRow

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["M", "K", "method", "init", "count", "errors", "mean", "min", "q1", "median", "q3", "max"]
BOXPLOT_COLUMNS = ["method", "init", "min", "q1", "median", "q3", "max", "mean"]


def _number(value: float) -> str:
    return f"{value:.6f}"


def _write(dataset: tablib.Dataset, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dataset.export("csv", lineterminator="\n"))
    return path


def summarize(rows: Sequence[ResultRow]) -> list[SummaryRow]:
    """One summary per (M, K, method, init), in order of first appearance."""
    if not rows:
        raise ValueError("Cannot summarise an empty result set")
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.M, row.K, row.method, row.init), []).append(row)

    summaries = []
    for (M, K, method, init), members in groups.items():
        rates = np.array([r.misclassification for r in members])
        q1, median, q3 = np.quantile(rates, [0.25, 0.5, 0.75], method="linear")
        summaries.append(
            SummaryRow(
                M=M,
                K=K,
                method=method,
                init=init,
                count=len(members),
                errors=sum(r.status == RowStatus.ERROR for r in members),
                mean=float(rates.mean()),
                minimum=float(rates.min()),
                q1=float(q1),
                median=float(median),
                q3=float(q3),
                maximum=float(rates.max()),
            )
        )
    return summaries


def write_results(rows: Sequence[ResultRow], path: Path) -> Path:
    table = tablib.Dataset(headers=RESULT_COLUMNS)
    for row in rows:
        table.append(
            [
                row.dataset_id,
                row.M,
                row.K,
                row.method.value,
                row.init.value,
                row.repeat,
                _number(row.misclassification),
                row.iterations,
                f"{row.wall_time_ms:.3f}",
                row.status.value,
            ]
        )
    logger.info(f"Wrote {len(rows)} result rows to {path}")
    return _write(table, path)


def write_summary(summaries: Sequence[SummaryRow], path: Path) -> Path:
    table = tablib.Dataset(headers=SUMMARY_COLUMNS)
    for s in summaries:
        table.append(
            [
                s.M,
                s.K,
                s.method.value,
                s.init.value,
                s.count,
                s.errors,
                *(_number(v) for v in (s.mean, s.minimum, s.q1, s.median, s.q3, s.maximum)),
            ]
        )
    return _write(table, path)


def write_boxplots(summaries: Sequence[SummaryRow], directory: Path) -> list[Path]:
    """``boxplot_<M>_<K>.csv`` per grid cell: one five-number row per method and init."""
    by_cell: dict[tuple[int, int], list[SummaryRow]] = {}
    for s in summaries:
        by_cell.setdefault((s.M, s.K), []).append(s)
    paths = []
    for (M, K), members in by_cell.items():
        table = tablib.Dataset(headers=BOXPLOT_COLUMNS)
        for s in members:
            table.append(
                [
                    s.method.value,
                    s.init.value,
                    *(_number(v) for v in (s.minimum, s.q1, s.median, s.q3, s.maximum, s.mean)),
                ]
            )
        paths.append(_write(table, Path(directory) / f"boxplot_{M}_{K}.csv"))
    return paths
