"""
The component pipeline: load ICA components, cluster them, and write one
subject label map per subject for inference.

A component set is a directory of ``comp_<subject>_<index>.smap`` files (a
whitespace grid of reals, one lattice row per line) with a matching
``comp_<subject>_<index>.tc`` (one real per line).
"""

import logging
import re
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from apps.core.exceptions import MapFormatError
from apps.lattice.models import LatticeDims
from apps.lattice.services import write_map
from apps.preproc.models import Component, PipelineResult
from apps.preproc.services.clustering import average_link_cluster, retain_consistent_clusters
from apps.preproc.services.distances import pairwise_component_distances
from apps.preproc.services.thresholding import build_subject_maps

logger = logging.getLogger(__name__)

COMPONENT_PATTERN = re.compile(r"^comp_(\d+)_(\d+)\.smap$")


def _load_text(path: Path, ndmin: int) -> np.ndarray:
    try:
        return np.loadtxt(path, dtype=float, ndmin=ndmin)
    except (OSError, ValueError) as exc:
        raise MapFormatError(f"{path}: {exc}") from exc


def read_components(directory: Path) -> tuple[list[Component], LatticeDims]:
    """All components in ``directory``, ordered by (subject, index), and their lattice."""
    directory = Path(directory)
    found = []
    for path in directory.glob("comp_*.smap"):
        match = COMPONENT_PATTERN.match(path.name)
        if match:
            found.append((int(match.group(1)), int(match.group(2)), path))
    if not found:
        raise MapFormatError(f"No comp_<subject>_<index>.smap files in {directory}")

    components = []
    dims = None
    for subject_id, index, path in sorted(found):
        grid = _load_text(path, ndmin=2)
        if dims is None:
            dims = LatticeDims(*grid.shape)
        elif grid.shape != dims.shape:
            raise MapFormatError(f"{path}: grid is {grid.shape[0]}x{grid.shape[1]}, expected {dims}")
        time_course = _load_text(path.with_suffix(".tc"), ndmin=1)
        components.append(Component(grid.ravel(), time_course, subject_id, index))
    logger.info(f"Loaded {len(components)} components on {dims} from {directory}")
    return components, dims


def run_pipeline(
    components: Sequence[Component],
    dims: LatticeDims,
    num_clusters: int,
    K: int,
    q: float | None = None,
    sigma: float | None = None,
    min_subjects: int | None = None,
) -> PipelineResult:
    """Distances, average-link clustering, the consistency filter and thresholding."""
    distances = pairwise_component_distances(components, dims, sigma)
    assignment = average_link_cluster(distances, num_clusters)
    retained = retain_consistent_clusters(assignment, components, min_subjects)
    subject_ids, maps = build_subject_maps(components, assignment, retained, dims, K, q)
    return PipelineResult(
        assignment=assignment, retained_clusters=retained, subject_ids=subject_ids, subject_maps=maps
    )


def save_subject_maps(result: PipelineResult, directory: Path) -> list[Path]:
    """Write ``Y_<i>.map`` for i = 0, 1, ... in subject order."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, subject_map in enumerate(result.subject_maps):
        path = directory / f"Y_{i}.map"
        write_map(subject_map, path)
        paths.append(path)
    return paths
