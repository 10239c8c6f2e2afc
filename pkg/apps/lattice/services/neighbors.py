"""
The 8-neighbour system on the 2D lattice.

Boundary voxels simply have fewer neighbours (no wrap-around).
"""

from functools import lru_cache

import numpy as np
from scipy import ndimage

from apps.lattice.models import LatticeDims

# 3x3 window without its centre: the 8-neighbour stencil.
NEIGHBOR_KERNEL = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=np.int64)

_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def neighbors(s: int, dims: LatticeDims) -> list[int]:
    """Return the in-bounds 8-neighbours of voxel ``s`` in ascending index order."""
    row, col = dims.coords(s)
    result = []
    for dr, dc in _OFFSETS:
        r, c = row + dr, col + dc
        if 0 <= r < dims.rows and 0 <= c < dims.cols:
            result.append(r * dims.cols + c)
    return result


@lru_cache(maxsize=64)
def neighbor_table(dims: LatticeDims) -> tuple[tuple[int, ...], ...]:
    """Neighbour lists for every voxel, cached per lattice size."""
    return tuple(tuple(neighbors(s, dims)) for s in range(dims.n_voxels))


def neighbor_label_counts(values: np.ndarray, K: int) -> np.ndarray:
    """
    Count neighbour labels at every voxel.

    Returns an array of shape (rows, cols, K) whose entry [r, c, k] is the number
    of 8-neighbours of (r, c) carrying label k.
    """
    values = np.asarray(values)
    counts = np.empty(values.shape + (K,), dtype=np.int64)
    for k in range(K):
        counts[..., k] = ndimage.correlate(
            (values == k).astype(np.int64), NEIGHBOR_KERNEL, mode="constant", cval=0
        )
    return counts
