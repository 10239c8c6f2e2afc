"""
Starting points for the group map.
"""

import numpy as np

from apps.core.seeding import make_rng
from apps.lattice.models import LabelMap, LatticeDims


def init_random(dims: LatticeDims, K: int, seed: int) -> LabelMap:
    """Independent uniform labels."""
    if K < 2:
        raise ValueError(f"Label count K must be at least 2, got {K}")
    return LabelMap(make_rng(seed, "init").integers(0, K, size=dims.shape), K)


def init_greedy(subjects: list[LabelMap]) -> LabelMap:
    """
    Most frequent nonzero subject label at each voxel, or 0 where every subject
    reads 0. Ties go to the smallest label.
    """
    if not subjects:
        raise ValueError("Greedy initialisation needs at least one subject map")
    dims, K = subjects[0].dims, subjects[0].K
    if any(y.dims != dims or y.K != K for y in subjects):
        raise ValueError("Subject maps must share dims and K")
    voxels = np.arange(dims.n_voxels)
    counts = np.zeros((dims.n_voxels, K), dtype=np.int64)
    for y in subjects:
        counts[voxels, y.flat] += 1
    counts[:, 0] = 0
    return LabelMap.from_flat(dims, np.argmax(counts, axis=1), K)
