"""
Benchmark domain types: experiment configurations and result rows.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from django.db import models

from apps.forward.models import GenerativeModel
from apps.infer.models import Algorithm
from apps.lattice.models import LatticeDims


class Method(models.TextChoices):
    """Inference method: generative model used for inference plus algorithm."""

    IC = "IC", "Model I, coordinate ascent"
    IIC = "IIC", "Model II, coordinate ascent"
    IIV = "IIV", "Model II, variational Bayes"

    @property
    def model(self) -> GenerativeModel:
        return GenerativeModel.MODEL_I if self == Method.IC else GenerativeModel.MODEL_II

    @property
    def algorithm(self) -> Algorithm:
        return Algorithm.VB if self == Method.IIV else Algorithm.ICM


class InitKind(models.TextChoices):
    X01 = "X01", "Uniform random labels"
    X02 = "X02", "Most frequent non-zero subject label"


class RowStatus(models.TextChoices):
    OK = "ok", "Completed"
    ERROR = "error", "Inference failed"


class LabelAlignment(models.TextChoices):
    NONE = "none", "Compare labels directly"
    HUNGARIAN = "hungarian", "Best label permutation first"


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One benchmark experiment: every (M, K) cell of ``grid`` is generated
    ``repeats`` times and each dataset is fitted with every method and init.

    ``record_timing`` is off by default so that results files are byte-identical
    across runs with the same root seed.
    """

    grid: list[tuple[int, int]]
    dims: LatticeDims = field(default_factory=lambda: LatticeDims(64, 64))
    data_model: GenerativeModel = GenerativeModel.MODEL_I
    repeats: int = 10
    methods: tuple[Method, ...] = (Method.IC, Method.IIC, Method.IIV)
    inits: tuple[InitKind, ...] = (InitKind.X01, InitKind.X02)
    root_seed: int = 0
    output_dir: Path = Path("results")
    sweeps: int | None = None
    max_iterations: int | None = None
    align_labels: LabelAlignment = LabelAlignment.NONE
    record_timing: bool = False

    def __post_init__(self):
        grid = [(int(M), int(K)) for M, K in self.grid]
        if not grid:
            raise ValueError("The experiment grid is empty")
        for M, K in grid:
            if M < 1 or K < 2:
                raise ValueError(f"Grid cell (M={M}, K={K}) needs M >= 1 and K >= 2")
        if self.repeats < 1:
            raise ValueError(f"repeats must be at least 1, got {self.repeats}")
        if not self.methods or not self.inits:
            raise ValueError("At least one method and one initialisation are required")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "data_model", GenerativeModel.parse(self.data_model))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        object.__setattr__(self, "inits", tuple(InitKind(i) for i in self.inits))
        object.__setattr__(self, "align_labels", LabelAlignment(self.align_labels))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if isinstance(self.dims, str):
            object.__setattr__(self, "dims", LatticeDims.parse(self.dims))

    @property
    def row_count(self) -> int:
        return len(self.grid) * self.repeats * len(self.methods) * len(self.inits)

    def to_dict(self) -> dict[str, Any]:
        return {
            "grid": [list(cell) for cell in self.grid],
            "dims": str(self.dims),
            "data_model": self.data_model.value,
            "repeats": self.repeats,
            "methods": [m.value for m in self.methods],
            "inits": [i.value for i in self.inits],
            "root_seed": self.root_seed,
            "output_dir": str(self.output_dir),
            "sweeps": self.sweeps,
            "max_iterations": self.max_iterations,
            "align_labels": self.align_labels.value,
            "record_timing": self.record_timing,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ValueError(f"Unknown experiment config keys: {', '.join(unknown)}")
        if "grid" not in known:
            raise ValueError("Experiment config needs a 'grid' of [M, K] pairs")
        dims = known.get("dims")
        if isinstance(dims, (list, tuple)):
            known["dims"] = LatticeDims(*dims)
        return cls(**known)


RESULT_COLUMNS = [
    "dataset_id",
    "M",
    "K",
    "method",
    "init",
    "repeat",
    "misclassification",
    "iterations",
    "wall_time_ms",
    "status",
]


@dataclass(frozen=True)
class ResultRow:
    dataset_id: str
    M: int
    K: int
    method: Method
    init: InitKind
    repeat: int
    misclassification: float
    iterations: int
    wall_time_ms: float
    status: RowStatus = RowStatus.OK

    def __post_init__(self):
        if not 0 <= self.misclassification <= 1:
            raise ValueError(f"Misclassification must lie in [0, 1], got {self.misclassification}")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "init", InitKind(self.init))
        object.__setattr__(self, "status", RowStatus(self.status))

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data.update(method=self.method.value, init=self.init.value, status=self.status.value)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ResultRow":
        return cls(**data)


@dataclass(frozen=True)
class SummaryRow:
    """Five-number summary and mean of one (M, K, method, init) group."""

    M: int
    K: int
    method: Method
    init: InitKind
    count: int
    errors: int
    mean: float
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
