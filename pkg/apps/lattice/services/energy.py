"""
Pairwise potential and clique energies.
"""

import numpy as np

from apps.lattice.models import BinaryMask, LabelMap


def potential(a: int, b: int) -> int:
    """0 when the labels agree, 1 otherwise."""
    return 0 if a == b else 1


def disagreement_count(values: np.ndarray) -> int:
    """Number of unordered neighbour pairs with different labels."""
    v = np.asarray(values)
    return int(
        np.count_nonzero(v[:, :-1] != v[:, 1:])
        + np.count_nonzero(v[:-1, :] != v[1:, :])
        + np.count_nonzero(v[:-1, :-1] != v[1:, 1:])
        + np.count_nonzero(v[:-1, 1:] != v[1:, :-1])
    )


def pair_count(rows: int, cols: int) -> int:
    """Total number of unordered 8-neighbour pairs on a rows x cols lattice."""
    return rows * (cols - 1) + (rows - 1) * cols + 2 * (rows - 1) * (cols - 1)


def disagreement_energy(field: LabelMap | BinaryMask, beta: float) -> float:
    """beta times the number of disagreeing cliques, each pair counted once."""
    if beta < 0:
        raise ValueError(f"Inverse temperature must be non-negative, got {beta}")
    return beta * disagreement_count(field.values)
