"""
Lattice domain types: dimensions, label maps and binary masks.

Maps are immutable: the wrapped array is copied on construction and marked
read-only, so services always work on ``.values.copy()`` when they need scratch
space. Voxel index ``s`` is the row-major linearisation ``row * cols + col``.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LatticeDims:
    """Size of the 2D voxel lattice."""

    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"Lattice dims must be positive, got {self.rows}x{self.cols}")

    @property
    def n_voxels(self) -> int:
        return self.rows * self.cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def coords(self, s: int) -> tuple[int, int]:
        """Return the (row, col) of voxel index ``s``."""
        if not 0 <= s < self.n_voxels:
            raise IndexError(f"Voxel index {s} out of range for {self.rows}x{self.cols} lattice")
        return divmod(s, self.cols)

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise IndexError(f"Voxel ({row}, {col}) out of range for {self.rows}x{self.cols} lattice")
        return row * self.cols + col

    def __str__(self):
        return f"{self.rows}x{self.cols}"

    @classmethod
    def parse(cls, text: str) -> "LatticeDims":
        """Parse ``"64x64"`` (or ``"64,64"``) into dims."""
        parts = text.lower().replace(",", "x").split("x")
        if len(parts) != 2:
            raise ValueError(f"Expected dims like '64x64', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=np.int64, copy=True)
    if array.ndim != 2:
        raise ValueError(f"Maps must be 2D, got an array with shape {array.shape}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class LabelMap:
    """A field of integer labels in {0, ..., K-1} over the lattice."""

    values: np.ndarray
    K: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.K < 2:
            raise ValueError(f"Label count K must be at least 2, got {self.K}")
        if self.values.size and (self.values.min() < 0 or self.values.max() >= self.K):
            raise ValueError(
                f"Labels must lie in [0, {self.K - 1}], "
                f"found range [{self.values.min()}, {self.values.max()}]"
            )

    @property
    def dims(self) -> LatticeDims:
        return LatticeDims(*self.values.shape)

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @classmethod
    def from_flat(cls, dims: LatticeDims, flat, K: int) -> "LabelMap":
        return cls(np.asarray(flat, dtype=np.int64).reshape(dims.shape), K)

    @classmethod
    def constant(cls, dims: LatticeDims, label: int, K: int) -> "LabelMap":
        return cls(np.full(dims.shape, label, dtype=np.int64), K)

    def relabel(self, permutation) -> "LabelMap":
        """Apply ``label -> permutation[label]`` to every voxel."""
        permutation = np.asarray(permutation, dtype=np.int64)
        if sorted(permutation.tolist()) != list(range(self.K)):
            raise ValueError(f"Not a permutation of {self.K} labels: {permutation.tolist()}")
        return LabelMap(permutation[self.values], self.K)

    def __eq__(self, other):
        if not isinstance(other, LabelMap):
            return NotImplemented
        return self.K == other.K and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """A {0, 1} field over the lattice."""

    values: np.ndarray
    K: int = field(default=2, init=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.values.size and not np.isin(self.values, (0, 1)).all():
            raise ValueError("Mask values must be 0 or 1")

    @property
    def dims(self) -> LatticeDims:
        return LatticeDims(*self.values.shape)

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @classmethod
    def zeros(cls, dims: LatticeDims) -> "BinaryMask":
        return cls(np.zeros(dims.shape, dtype=np.int64))

    @classmethod
    def ones(cls, dims: LatticeDims) -> "BinaryMask":
        return cls(np.ones(dims.shape, dtype=np.int64))

    def as_label_map(self) -> LabelMap:
        return LabelMap(self.values, 2)

    def flipped(self) -> "BinaryMask":
        return BinaryMask(1 - self.values)

    def __eq__(self, other):
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None
