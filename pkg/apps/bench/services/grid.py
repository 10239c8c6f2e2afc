"""
The experiment grid: generate datasets, fit every method from every
initialisation, and score the estimates against the generating group map.
"""

import logging
import time

from apps.bench.models import ExperimentConfig, InitKind, LabelAlignment, Method, ResultRow, RowStatus
from apps.bench.services.metrics import align_labels_hungarian, misclassification_rate
from apps.core.conf import setting
from apps.core.seeding import derive_seed
from apps.forward.models import Dataset
from apps.forward.services import generate_dataset
from apps.infer.models import Algorithm, InferenceOptions
from apps.infer.services import init_greedy, init_random, run_icm, run_vb
from apps.lattice.models import LabelMap

logger = logging.getLogger(__name__)

EXECUTORS = ("inline", "celery")


def dataset_id(M: int, K: int, repeat: int) -> str:
    return f"M{M}_K{K}_r{repeat}"


class GridRunner:
    """
    Runs the cells of one experiment.

    Each (M, K, repeat) cell draws its dataset and its random initialisation
    from seeds derived from the root seed and the cell coordinates, so a cell's
    rows do not depend on which other cells run or in what order.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def cells(self) -> list[tuple[int, int, int]]:
        return [(M, K, repeat) for M, K in self.config.grid for repeat in range(self.config.repeats)]

    def build_dataset(self, M: int, K: int, repeat: int) -> Dataset:
        return generate_dataset(
            M,
            K,
            self.config.dims,
            self.config.data_model,
            sweeps=self.config.sweeps,
            seed=derive_seed(self.config.root_seed, "dataset", M, K, repeat),
        )

    def initial_map(self, kind: InitKind, dataset: Dataset, repeat: int) -> LabelMap:
        if kind == InitKind.X01:
            seed = derive_seed(self.config.root_seed, "init", dataset.M, dataset.K, repeat)
            return init_random(dataset.dims, dataset.K, seed)
        return init_greedy(dataset.subjects)

    def options(self, method: Method, repeat: int) -> InferenceOptions:
        overrides = {"model": method.model, "seed": repeat}
        if self.config.max_iterations is not None:
            overrides["max_iterations"] = self.config.max_iterations
        if method.algorithm == Algorithm.VB:
            return InferenceOptions.for_vb(**overrides)
        return InferenceOptions.for_icm(**overrides)

    def fit(self, method: Method, dataset: Dataset, X0: LabelMap, repeat: int):
        options = self.options(method, repeat)
        if method.algorithm == Algorithm.VB:
            return run_vb(dataset.subjects, X0, options)
        return run_icm(dataset.subjects, X0, options)

    def score(self, X_est: LabelMap, X_true: LabelMap) -> float:
        if self.config.align_labels == LabelAlignment.HUNGARIAN:
            X_est = align_labels_hungarian(X_est, X_true)
        return misclassification_rate(X_est, X_true)

    def run_cell(self, M: int, K: int, repeat: int) -> list[ResultRow]:
        dataset = self.build_dataset(M, K, repeat)
        rows = []
        for method in self.config.methods:
            for kind in self.config.inits:
                rows.append(self._run_one(dataset, method, kind, repeat))
        logger.info(f"Grid cell {dataset_id(M, K, repeat)} done ({len(rows)} rows)")
        return rows

    def _run_one(self, dataset: Dataset, method: Method, kind: InitKind, repeat: int) -> ResultRow:
        row = {
            "dataset_id": dataset_id(dataset.M, dataset.K, repeat),
            "M": dataset.M,
            "K": dataset.K,
            "method": method,
            "init": kind,
            "repeat": repeat,
        }
        started = time.perf_counter()
        try:
            state = self.fit(method, dataset, self.initial_map(kind, dataset, repeat), repeat)
            rate = self.score(state.X, dataset.X)
        except Exception:
            logger.exception(f"{method.value}/{kind.value} failed on {row['dataset_id']}")
            return ResultRow(
                **row,
                misclassification=1.0,
                iterations=0,
                wall_time_ms=self._elapsed(started),
                status=RowStatus.ERROR,
            )
        return ResultRow(
            **row,
            misclassification=rate,
            iterations=state.iteration,
            wall_time_ms=self._elapsed(started),
        )

    def _elapsed(self, started: float) -> float:
        if not self.config.record_timing:
            return 0.0
        return round((time.perf_counter() - started) * 1000.0, 3)

    def run(self, executor: str | None = None) -> list[ResultRow]:
        """All rows, in config order whichever executor runs the cells."""
        executor = executor or setting("GROUPMAP_BENCH_EXECUTOR", "inline")
        if executor not in EXECUTORS:
            raise ValueError(f"Unknown executor {executor!r}; expected one of {', '.join(EXECUTORS)}")
        cells = self.cells()
        logger.info(f"Running {len(cells)} grid cells ({self.config.row_count} rows) with the {executor} executor")

        if executor == "inline":
            return [row for cell in cells for row in self.run_cell(*cell)]

        from apps.bench.tasks import run_grid_cell

        payload = self.config.to_dict()
        pending = [
            run_grid_cell.delay({"config": payload, "M": M, "K": K, "repeat": repeat}) for M, K, repeat in cells
        ]
        return [ResultRow.from_dict(row) for result in pending for row in result.get()]


def run_grid(config: ExperimentConfig, executor: str | None = None) -> list[ResultRow]:
    return GridRunner(config).run(executor)
