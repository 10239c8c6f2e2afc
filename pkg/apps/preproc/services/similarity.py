"""
Subject-level data matrices: RV similarity, outlier exclusion and PCA reduction.
"""

import logging
from collections.abc import Sequence

import numpy as np

from apps.core.conf import setting
from apps.preproc.models import DataMatrix, DistanceMatrix

logger = logging.getLogger(__name__)


def _column_centred(D: DataMatrix) -> np.ndarray:
    return D.values - D.values.mean(axis=0, keepdims=True)


def rv_coefficient(Di: DataMatrix, Dj: DataMatrix) -> float:
    """
    RV coefficient Tr(Z_i Z_j) / sqrt(Tr(Z_i^2) Tr(Z_j^2)).

    Z = D* D*^T is the T x T configuration matrix of the column-centred data, so
    both subjects need the same time points as well as the same voxels.
    """
    if Di.V != Dj.V:
        raise ValueError(f"Voxel counts differ: {Di.V} vs {Dj.V}")
    if Di.T != Dj.T:
        raise ValueError(f"Time point counts differ: {Di.T} vs {Dj.T}")
    a = _column_centred(Di)
    b = _column_centred(Dj)
    za = a @ a.T
    zb = b @ b.T
    norm_a = np.sum(za**2)
    norm_b = np.sum(zb**2)
    if norm_a == 0 or norm_b == 0:
        raise ValueError("RV coefficient is undefined for a matrix with constant columns")
    # both configurations are symmetric, so Tr(Z_i Z_j) is their elementwise inner product
    cross = np.sum(za * zb)
    return float(min(cross / np.sqrt(norm_a * norm_b), 1.0))


def rv_distance_matrix(matrices: Sequence[DataMatrix]) -> DistanceMatrix:
    """Pairwise 1 - RV."""
    n = len(matrices)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = max(1.0 - rv_coefficient(matrices[i], matrices[j]), 0.0)
    return DistanceMatrix(values)


def exclude_outliers(dist: DistanceMatrix) -> list[int]:
    """
    Indices whose mean distance to the others is at most the grand mean plus one
    standard deviation of those means, in ascending order.
    """
    if dist.n < 2:
        raise ValueError(f"Outlier exclusion needs at least 2 items, got {dist.n}")
    means = dist.values.sum(axis=1) / (dist.n - 1)
    cutoff = means.mean() + means.std()
    retained = np.flatnonzero(means <= cutoff).tolist()
    if len(retained) < dist.n:
        excluded = sorted(set(range(dist.n)) - set(retained))
        logger.info(f"Excluded {len(excluded)} of {dist.n} subjects as outliers: {excluded}")
    return retained


def pca_cpv_reduce(D: DataMatrix, cpv: float | None = None) -> DataMatrix:
    """
    Keep the fewest principal components reaching ``cpv`` of the variance.

    Each time series is centred over voxels; the retained component scores are
    whitened to unit variance across voxels. Returns a t_i x V matrix.
    """
    cpv = setting("GROUPMAP_CPV", 0.95) if cpv is None else cpv
    if not 0 < cpv <= 1:
        raise ValueError(f"cpv must lie in (0, 1], got {cpv}")
    centred = D.values - D.values.mean(axis=1, keepdims=True)
    _, singular, basis = np.linalg.svd(centred, full_matrices=False)
    variance = singular**2
    if variance.sum() <= 0:
        raise ValueError("Cannot reduce a rank-0 data matrix")
    cumulative = np.cumsum(variance) / variance.sum()
    retained = int(np.searchsorted(cumulative, cpv - 1e-12)) + 1
    retained = min(retained, int(np.count_nonzero(variance > variance[0] * 1e-24)))
    logger.debug(f"CPV {cpv:.3f}: kept {retained} of {D.T} time points")
    # rows of ``basis`` are unit-norm and centred, so their per-voxel variance is 1 / V
    return DataMatrix(basis[:retained] * np.sqrt(D.V))
