"""
Pre-processing domain types: data matrices, ICA components and distance matrices.
"""

from dataclasses import dataclass

import numpy as np

from apps.lattice.models import LabelMap


def _frozen_float_array(values, ndim: int, name: str) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} has non-finite entries")
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """A T x V matrix: one row per time point, one column per voxel."""

    values: np.ndarray

    def __post_init__(self):
        values = _frozen_float_array(self.values, 2, "DataMatrix")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"DataMatrix needs at least one row and one column, got {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def V(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class Component:
    """One ICA component of one subject: a spatial map and its time course."""

    spatial_map: np.ndarray
    time_course: np.ndarray
    subject_id: int
    index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "spatial_map", _frozen_float_array(self.spatial_map, 1, "spatial_map"))
        object.__setattr__(self, "time_course", _frozen_float_array(self.time_course, 1, "time_course"))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric, non-negative, zero on the diagonal."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"A distance matrix must be square, got shape {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("Distances must be finite and non-negative")
        if not np.allclose(values, values.T, rtol=0, atol=1e-9):
            raise ValueError("Distance matrix is not symmetric")
        if np.any(np.diag(values) != 0):
            raise ValueError("Distance matrix must have a zero diagonal")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class MinMaxScale:
    """Affine map of [low, high] onto [0, 1]; a degenerate range maps to 0."""

    low: float
    high: float

    @classmethod
    def fit(cls, values: np.ndarray) -> "MinMaxScale":
        return cls(float(np.min(values)), float(np.max(values)))

    def __call__(self, value):
        value = np.asarray(value, dtype=float)
        span = self.high - self.low
        scaled = np.zeros_like(value) if span <= 0 else (value - self.low) / span
        return scaled if scaled.ndim else float(scaled)


@dataclass(frozen=True)
class PipelineResult:
    """Output of the component pipeline: clusters and one label map per subject."""

    assignment: np.ndarray
    retained_clusters: list[int]
    subject_ids: list[int]
    subject_maps: list[LabelMap]
