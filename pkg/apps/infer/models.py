"""
Inference domain types: mask posteriors, run options and run state.
"""

from dataclasses import dataclass, field

import numpy as np
from django.db import models

from apps.core.conf import setting
from apps.forward.models import GenerativeModel, ModelParams
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims


class Algorithm(models.TextChoices):
    ICM = "icm", "Coordinate ascent (ICM)"
    VB = "vb", "Mean-field variational Bayes"


class XUpdate(models.TextChoices):
    """Voxel visiting scheme for the group-map update."""

    SEQUENTIAL = "sequential", "Raster scan, in place"
    SIMULTANEOUS = "simultaneous", "All voxels from the previous map"


@dataclass(frozen=True, eq=False)
class VariationalPosterior:
    """q[i, r, c] = probability that subject i's mask is 1 at voxel (r, c)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 3:
            raise ValueError(f"Expected an (M, rows, cols) array, got shape {values.shape}")
        if values.shape[0] < 1:
            raise ValueError("A posterior needs at least one subject")
        if not np.all((values >= 0) & (values <= 1)):
            raise ValueError("Mask probabilities must lie in [0, 1]")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def M(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> LatticeDims:
        return LatticeDims(*self.values.shape[1:])

    @classmethod
    def constant(cls, M: int, dims: LatticeDims, value: float) -> "VariationalPosterior":
        return cls(np.full((M, *dims.shape), value))

    @classmethod
    def from_masks(cls, masks: list[BinaryMask]) -> "VariationalPosterior":
        """The degenerate posterior putting all mass on the given masks."""
        return cls(np.stack([m.values for m in masks]).astype(float))

    def thresholded(self, level: float = 0.5) -> list[BinaryMask]:
        return [BinaryMask((q >= level).astype(np.int64)) for q in self.values]


def _vb_max_iter() -> int:
    return setting("GROUPMAP_VB_MAX_ITER", 200)


def _vb_tol() -> float:
    return setting("GROUPMAP_VB_TOL", 1e-6)


@dataclass(frozen=True)
class InferenceOptions:
    """
    Settings for one inference run.

    ``convergence_tol`` is relative for VB (stop when |dF| < tol * max(1, |F|)) and
    a label-change count for ICM (stop when fewer than ``tol`` labels changed, so
    the default of 1 means "no change"). Use :meth:`for_icm` / :meth:`for_vb` for
    the configured defaults.
    """

    max_iterations: int = field(default_factory=_vb_max_iter)
    convergence_tol: float = field(default_factory=_vb_tol)
    estimate_theta: bool = True
    model: GenerativeModel = GenerativeModel.MODEL_II
    seed: int = 0
    x_update: XUpdate = XUpdate.SEQUENTIAL
    q_prior_coupling: bool = False
    snapshot_every: int | None = None
    initial_params: ModelParams | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if self.convergence_tol <= 0:
            raise ValueError(f"convergence_tol must be positive, got {self.convergence_tol}")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be positive, got {self.snapshot_every}")
        object.__setattr__(self, "model", GenerativeModel(self.model))
        object.__setattr__(self, "x_update", XUpdate(self.x_update))

    @classmethod
    def for_vb(cls, **overrides) -> "InferenceOptions":
        return cls(**overrides)

    @classmethod
    def for_icm(cls, **overrides) -> "InferenceOptions":
        defaults = {"max_iterations": setting("GROUPMAP_ICM_MAX_ITER", 100), "convergence_tol": 1}
        return cls(**(defaults | overrides))


@dataclass
class InferenceState:
    """Mutable state of a run; the final state is the run's result."""

    algorithm: Algorithm
    X: LabelMap
    params: ModelParams
    q: VariationalPosterior | None = None
    masks: list[BinaryMask] | None = None
    elbo_trace: list[float] = field(default_factory=list)
    log_posterior_trace: list[float] = field(default_factory=list)
    iteration: int = 0
    converged: bool = False
    snapshots: list[tuple[int, LabelMap]] = field(default_factory=list)
