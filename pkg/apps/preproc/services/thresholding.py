"""
Activation thresholding: z-scores, Benjamini-Hochberg FDR control and the
assembly of per-subject label maps from clustered components.
"""

import logging
from collections.abc import Sequence

import numpy as np
from scipy import stats

from apps.core.conf import setting
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims
from apps.preproc.models import Component

logger = logging.getLogger(__name__)


def zscore(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.size < 2 or np.ptp(values) == 0:
        raise ValueError("Cannot z-score a constant map")
    return stats.zscore(values, axis=None)


def fdr_threshold(zscores, q: float | None = None, dims: LatticeDims | None = None) -> BinaryMask:
    """
    1 where the two-sided p-value of z survives Benjamini-Hochberg at level q.

    The mask takes the shape of ``dims``, of a 2-D input, or is a single row.
    """
    q = setting("GROUPMAP_FDR_Q", 0.05) if q is None else q
    if not 0 < q < 1:
        raise ValueError(f"FDR level q must lie in (0, 1), got {q}")
    z = np.asarray(zscores, dtype=float)
    if dims is not None:
        shape = dims.shape
    elif z.ndim == 2:
        shape = z.shape
    else:
        shape = (1, z.size)
    p = 2.0 * stats.norm.sf(np.abs(z.ravel()))
    adjusted = stats.false_discovery_control(p, method="bh")
    return BinaryMask((adjusted <= q).astype(np.int64).reshape(shape))


def build_subject_maps(
    components: Sequence[Component],
    assignment: np.ndarray,
    retained: Sequence[int],
    dims: LatticeDims,
    K: int,
    q: float | None = None,
) -> tuple[list[int], list[LabelMap]]:
    """
    One label map per subject (ascending subject id).

    The i-th retained cluster becomes label i + 1. Each member map is z-scored
    and FDR-thresholded; a voxel active in several clusters takes the one with
    the largest |z|, and inactive voxels are 0.
    """
    if len(retained) > K - 1:
        raise ValueError(f"{len(retained)} retained clusters do not fit in labels 1..{K - 1}")
    assignment = np.asarray(assignment)
    label_of = {cluster: k + 1 for k, cluster in enumerate(retained)}
    subject_ids = sorted({c.subject_id for c in components})
    strength = {sid: np.zeros(dims.n_voxels) for sid in subject_ids}
    labels = {sid: np.zeros(dims.n_voxels, dtype=np.int64) for sid in subject_ids}

    for component, cluster in zip(components, assignment.tolist()):
        if cluster not in label_of:
            continue
        z = zscore(component.spatial_map)
        active = fdr_threshold(z, q, dims).flat.astype(bool)
        stronger = active & (np.abs(z) > strength[component.subject_id])
        strength[component.subject_id][stronger] = np.abs(z)[stronger]
        labels[component.subject_id][stronger] = label_of[cluster]

    maps = [LabelMap.from_flat(dims, labels[sid], K) for sid in subject_ids]
    for sid, subject_map in zip(subject_ids, maps):
        logger.debug(f"Subject {sid}: {int(np.count_nonzero(subject_map.flat))} active voxels")
    return subject_ids, maps
