"""
Agreement between an estimated and a true group map.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from apps.lattice.models import LabelMap


def _check_comparable(X_est: LabelMap, X_true: LabelMap) -> None:
    if X_est.dims != X_true.dims:
        raise ValueError(f"Estimated map is {X_est.dims}, true map is {X_true.dims}")
    if X_est.K != X_true.K:
        raise ValueError(f"Estimated map has K={X_est.K}, true map has K={X_true.K}")


def misclassification_rate(X_est: LabelMap, X_true: LabelMap) -> float:
    """Fraction of voxels whose estimated label differs from the true one; no relabelling."""
    _check_comparable(X_est, X_true)
    return float(np.count_nonzero(X_est.values != X_true.values) / X_true.dims.n_voxels)


def align_labels_hungarian(X_est: LabelMap, X_true: LabelMap) -> LabelMap:
    """Relabel ``X_est`` by the permutation maximising voxel agreement with ``X_true``."""
    _check_comparable(X_est, X_true)
    K = X_true.K
    agreement = np.zeros((K, K), dtype=np.int64)
    np.add.at(agreement, (X_est.flat, X_true.flat), 1)
    rows, cols = linear_sum_assignment(agreement, maximize=True)
    permutation = np.empty(K, dtype=np.int64)
    permutation[rows] = cols
    return X_est.relabel(permutation)
