"""
Average-link agglomerative clustering of components.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from apps.preproc.models import Component, DistanceMatrix

logger = logging.getLogger(__name__)


def average_link_cluster(dist: DistanceMatrix, num_clusters: int) -> np.ndarray:
    """
    Merge the two closest clusters, by mean cross-pair distance, until
    ``num_clusters`` remain.

    Clusters are kept ordered by their lowest member; ties go to the lowest pair
    in that order. Returns the cluster number of every item, clusters numbered
    0, 1, ... by lowest member.

    On tied distances scipy's average linkage merges along its nearest neighbour
    chain instead of taking the lowest pair.
    """
    n = dist.n
    if not 1 <= num_clusters <= n:
        raise ValueError(f"num_clusters must lie in [1, {n}], got {num_clusters}")
    members = [[i] for i in range(n)]
    linkage = dist.values.copy()
    np.fill_diagonal(linkage, np.inf)

    while len(members) > num_clusters:
        # the first row-major minimum of the symmetric matrix is the lowest pair
        a, b = np.unravel_index(np.argmin(linkage), linkage.shape)
        a, b = (int(a), int(b)) if a < b else (int(b), int(a))
        na, nb = len(members[a]), len(members[b])
        # average-link update: the merged row is the size-weighted mean of the two
        merged = (na * linkage[a] + nb * linkage[b]) / (na + nb)
        linkage[a, :] = merged
        linkage[:, a] = merged
        linkage[a, a] = np.inf
        linkage = np.delete(np.delete(linkage, b, axis=0), b, axis=1)
        members[a] = sorted(members[a] + members[b])
        del members[b]

    assignment = np.empty(n, dtype=np.int64)
    for cluster, items in enumerate(members):
        assignment[items] = cluster
    return assignment


def retain_consistent_clusters(
    assignment: np.ndarray, components: Sequence[Component], min_subjects: int | None = None
) -> list[int]:
    """
    Clusters holding components of at least ``min_subjects`` distinct subjects
    (default: half the subjects, rounded up), in ascending order.
    """
    assignment = np.asarray(assignment)
    if assignment.size != len(components):
        raise ValueError(f"{assignment.size} assignments for {len(components)} components")
    subjects = {c.subject_id for c in components}
    if min_subjects is None:
        min_subjects = math.ceil(len(subjects) / 2)
    retained = []
    for cluster in np.unique(assignment).tolist():
        present = {components[k].subject_id for k in np.flatnonzero(assignment == cluster)}
        if len(present) >= min_subjects:
            retained.append(cluster)
    logger.info(
        f"Retained {len(retained)} of {len(np.unique(assignment))} clusters "
        f"present in at least {min_subjects} of {len(subjects)} subjects"
    )
    return retained
