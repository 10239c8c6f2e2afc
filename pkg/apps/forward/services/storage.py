"""
Dataset directories: ``manifest.json`` plus ``X.map``, ``H_<i>.map`` and
``Y_<i>.map`` in the shared map text format.
"""

import json
import logging
from pathlib import Path

from apps.core.exceptions import MapFormatError
from apps.forward.models import Dataset, GenerativeModel, MaskConvention, ModelParams
from apps.lattice.services import read_map, read_mask, write_map

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def save_dataset(dataset: Dataset, directory: Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "M": dataset.M,
        "K": dataset.K,
        "dims": [dataset.dims.rows, dataset.dims.cols],
        "model": dataset.model.value,
        "seed": dataset.seed,
        "mask_convention": dataset.mask_convention.value,
        "sweeps": dataset.sweeps,
        **dataset.params.to_dict(),
    }
    (directory / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    write_map(dataset.X, directory / "X.map")
    for i, (mask, subject) in enumerate(zip(dataset.masks, dataset.subjects)):
        write_map(mask, directory / f"H_{i}.map")
        write_map(subject, directory / f"Y_{i}.map")
    logger.info(f"Saved dataset (M={dataset.M}, K={dataset.K}, {dataset.dims}) to {directory}")
    return directory


def load_manifest(directory: Path) -> dict:
    path = Path(directory) / MANIFEST_NAME
    try:
        return json.loads(path.read_text())
    except OSError as e:
        raise MapFormatError(f"Cannot read dataset manifest {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MapFormatError(f"{path} is not valid JSON: {e}") from e


def load_subjects(directory: Path, M: int | None = None) -> list:
    """Read ``Y_0.map`` ... ``Y_<M-1>.map``; without ``M``, read every consecutive file present."""
    directory = Path(directory)
    subjects = []
    i = 0
    while M is None or i < M:
        path = directory / f"Y_{i}.map"
        if M is None and not path.exists():
            break
        subjects.append(read_map(path))
        i += 1
    if not subjects:
        raise MapFormatError(f"No subject maps Y_<i>.map found in {directory}")
    return subjects


def load_dataset(directory: Path) -> Dataset:
    """Read a dataset written by :func:`save_dataset`."""
    directory = Path(directory)
    manifest = load_manifest(directory)
    try:
        M = int(manifest["M"])
        params = ModelParams.from_dict(manifest)
        model = GenerativeModel.parse(manifest["model"])
        convention = MaskConvention(manifest.get("mask_convention", MaskConvention.MAIN_TEXT))
        dataset = Dataset(
            X=read_map(directory / "X.map"),
            masks=[read_mask(directory / f"H_{i}.map") for i in range(M)],
            subjects=load_subjects(directory, M),
            params=params,
            model=model,
            seed=int(manifest["seed"]),
            mask_convention=convention,
            sweeps=manifest.get("sweeps"),
        )
    except KeyError as e:
        raise MapFormatError(f"Manifest in {directory} is missing {e}") from e
    except ValueError as e:
        if isinstance(e, MapFormatError):
            raise
        raise MapFormatError(f"Dataset in {directory} is inconsistent: {e}") from e
    if list(manifest.get("dims", dataset.dims.shape)) != list(dataset.dims.shape):
        raise MapFormatError(f"Manifest dims {manifest['dims']} do not match X.map {dataset.dims}")
    return dataset
