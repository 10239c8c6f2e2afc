"""
Label sweeps shared by the group-map and mask updates.

Each voxel takes argmax_x [data[s, x] - beta * #{r in ds : label(r) != x}],
with ties going to the smallest label. Since the neighbour count is fixed, that
is argmax_x [data[s, x] + beta * n_x(s)].
"""

import numpy as np

from apps.lattice.models import LatticeDims
from apps.lattice.services import neighbor_label_counts, neighbor_table


def sweep_labels(
    data: np.ndarray,
    labels: np.ndarray,
    dims: LatticeDims,
    beta: float,
    sequential: bool = True,
) -> np.ndarray:
    """
    One pass over the lattice.

    ``sequential`` visits voxels in raster order and updates in place, so later
    voxels see earlier updates; otherwise every voxel is updated from ``labels``.
    """
    n, K = data.shape
    if sequential:
        current = np.asarray(labels).ravel().tolist()
        rows = data.tolist()
        candidates = range(K)
        for s, nbrs in enumerate(neighbor_table(dims)):
            scores = rows[s]
            if beta:
                scores = list(scores)
                for r in nbrs:
                    scores[current[r]] += beta
            current[s] = max(candidates, key=scores.__getitem__)
        return np.array(current, dtype=np.int64).reshape(dims.shape)

    counts = neighbor_label_counts(np.asarray(labels).reshape(dims.shape), K).reshape(n, K)
    return np.argmax(data + beta * counts, axis=1).reshape(dims.shape)
