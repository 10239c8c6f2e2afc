"""
Distances between ICA components.

Spatial maps are compared with the image Euclidean distance (IMED), time courses
with dynamic time warping (DTW); the component distance averages the two after
min-max scaling each over the pairwise set.
"""

import logging
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from apps.core.conf import setting
from apps.lattice.models import LatticeDims
from apps.preproc.models import Component, DistanceMatrix, MinMaxScale

logger = logging.getLogger(__name__)


def _normalized(image: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(image))
    # an all-zero image has no intensity to normalise and is compared as is
    return image / peak if peak > 0 else image


def _axis_kernel(length: int, sigma: float) -> np.ndarray:
    offsets = np.arange(length)
    return np.exp(-np.subtract.outer(offsets, offsets) ** 2 / (2.0 * sigma**2))


@lru_cache(maxsize=2)
def _gaussian_metric(dims: LatticeDims, sigma: float) -> np.ndarray:
    rows, cols = np.indices(dims.shape).reshape(2, -1)
    squared = (rows[:, None] - rows[None, :]) ** 2 + (cols[:, None] - cols[None, :]) ** 2
    G = np.exp(-squared / (2.0 * sigma**2))
    G.flags.writeable = False
    return G


def imed(x, y, dims: LatticeDims, sigma: float | None = None) -> float:
    """
    (d^T G d) / N with d the difference of the max-normalised images and
    g_ij = exp(-|P_i - P_j|^2 / (2 sigma^2)) / (2 pi sigma^2).

    Small images materialise G; larger ones use G = G_rows (x) G_cols, so
    d^T G d = sum(D * (G_rows D G_cols)) with D the difference as a grid.
    """
    sigma = setting("GROUPMAP_IMED_SIGMA", 1.0) if sigma is None else sigma
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != dims.n_voxels or y.size != dims.n_voxels:
        raise ValueError(f"Images of {x.size} and {y.size} pixels do not fit lattice {dims}")
    d = _normalized(x) - _normalized(y)
    scale = 1.0 / (2.0 * np.pi * sigma**2)

    if dims.n_voxels <= setting("GROUPMAP_IMED_DIRECT_MAX_VOXELS", 4096):
        value = scale * (d @ _gaussian_metric(dims, float(sigma)) @ d)
    else:
        grid = d.reshape(dims.shape)
        filtered = _axis_kernel(dims.rows, sigma) @ grid @ _axis_kernel(dims.cols, sigma)
        value = scale * np.sum(grid * filtered)
    return float(value / dims.n_voxels)


def dtw(x, y) -> float:
    """Lowest-cost monotone alignment of two series under absolute-difference cost."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size == 0 or y.size == 0:
        raise ValueError("DTW needs two non-empty series")
    cost = np.abs(np.subtract.outer(x, y))
    acc = np.full((x.size + 1, y.size + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, x.size + 1):
        for j in range(1, y.size + 1):
            acc[i, j] = cost[i - 1, j - 1] + min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1])
    return float(acc[-1, -1])


def combined_distance(
    c1: Component,
    c2: Component,
    dims: LatticeDims,
    sigma: float | None = None,
    imed_scale: MinMaxScale | None = None,
    dtw_scale: MinMaxScale | None = None,
) -> float:
    """Mean of the spatial and temporal distances, each scaled when a scale is given."""
    spatial = imed(c1.spatial_map, c2.spatial_map, dims, sigma)
    temporal = dtw(c1.time_course, c2.time_course)
    if imed_scale is not None:
        spatial = imed_scale(spatial)
    if dtw_scale is not None:
        temporal = dtw_scale(temporal)
    return (spatial + temporal) / 2.0


def pairwise_component_distances(
    components: Sequence[Component], dims: LatticeDims, sigma: float | None = None
) -> DistanceMatrix:
    n = len(components)
    spatial = np.zeros((n, n))
    temporal = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            # G is positive definite; clip rounding below zero
            spatial[i, j] = spatial[j, i] = max(
                imed(components[i].spatial_map, components[j].spatial_map, dims, sigma), 0.0
            )
            temporal[i, j] = temporal[j, i] = dtw(components[i].time_course, components[j].time_course)
    combined = (MinMaxScale.fit(spatial)(spatial) + MinMaxScale.fit(temporal)(temporal)) / 2.0
    logger.debug(f"Computed {n * (n - 1) // 2} component distances")
    return DistanceMatrix(combined)
