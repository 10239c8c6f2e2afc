"""
Text storage for label maps, masks and probability maps.

Label maps and masks: a ``rows cols K`` header line followed by ``rows`` lines of
``cols`` space-separated integers (row-major). Probability maps: a ``rows cols``
header followed by the grid of reals with 6 decimal places.
"""

import logging
from pathlib import Path

import numpy as np

from apps.core.exceptions import MapFormatError
from apps.lattice.models import BinaryMask, LabelMap

logger = logging.getLogger(__name__)


def _format_grid(values: np.ndarray, fmt: str) -> str:
    return "\n".join(" ".join(fmt.format(v) for v in row) for row in values.tolist())


def _read_lines(path: Path) -> list[str]:
    try:
        lines = [line for line in Path(path).read_text().splitlines() if line.strip()]
    except OSError as e:
        raise MapFormatError(f"Cannot read map file {path}: {e}") from e
    if not lines:
        raise MapFormatError(f"Map file {path} is empty")
    return lines


def _parse_grid(lines: list[str], rows: int, cols: int, path: Path, cast) -> np.ndarray:
    if len(lines) != rows:
        raise MapFormatError(f"{path}: header declares {rows} rows, found {len(lines)}")
    grid = []
    for i, line in enumerate(lines):
        tokens = line.split()
        if len(tokens) != cols:
            raise MapFormatError(f"{path}: row {i} has {len(tokens)} values, expected {cols}")
        try:
            grid.append([cast(t) for t in tokens])
        except ValueError as e:
            raise MapFormatError(f"{path}: row {i} is not numeric: {e}") from e
    return np.array(grid)


def format_map(field: LabelMap | BinaryMask) -> str:
    rows, cols = field.values.shape
    return f"{rows} {cols} {field.K}\n{_format_grid(field.values, '{}')}\n"


def write_map(field: LabelMap | BinaryMask, path: Path) -> None:
    """Write a label map or mask in the shared text format."""
    Path(path).write_text(format_map(field))
    logger.debug(f"Wrote {field.values.shape[0]}x{field.values.shape[1]} map to {path}")


def read_map(path: Path) -> LabelMap:
    """Read a label map written by :func:`write_map`."""
    lines = _read_lines(path)
    header = lines[0].split()
    if len(header) != 3:
        raise MapFormatError(f"{path}: expected header 'rows cols K', got {lines[0]!r}")
    try:
        rows, cols, K = (int(t) for t in header)
    except ValueError as e:
        raise MapFormatError(f"{path}: non-integer header {lines[0]!r}") from e
    values = _parse_grid(lines[1:], rows, cols, path, int)
    try:
        return LabelMap(values.reshape(rows, cols), K)
    except ValueError as e:
        raise MapFormatError(f"{path}: {e}") from e


def read_mask(path: Path) -> BinaryMask:
    """Read a binary mask (a label map with K = 2)."""
    label_map = read_map(path)
    if label_map.K != 2:
        raise MapFormatError(f"{path}: masks must declare K = 2, got {label_map.K}")
    return BinaryMask(label_map.values)


def write_probmap(values: np.ndarray, path: Path) -> None:
    """Write a grid of probabilities with 6 decimal places."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    Path(path).write_text(f"{rows} {cols}\n{_format_grid(values, '{:.6f}')}\n")


def read_probmap(path: Path) -> np.ndarray:
    lines = _read_lines(path)
    header = lines[0].split()
    if len(header) != 2:
        raise MapFormatError(f"{path}: expected header 'rows cols', got {lines[0]!r}")
    rows, cols = (int(t) for t in header)
    return _parse_grid(lines[1:], rows, cols, path, float).reshape(rows, cols).astype(float)
