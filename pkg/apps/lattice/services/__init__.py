"""
Lattice services: neighbourhoods, clique energies and map storage.
"""

from .energy import disagreement_count, disagreement_energy, pair_count, potential
from .neighbors import neighbor_label_counts, neighbor_table, neighbors
from .storage import read_map, read_mask, read_probmap, write_map, write_probmap

__all__ = [
    "disagreement_count",
    "disagreement_energy",
    "neighbor_label_counts",
    "neighbor_table",
    "neighbors",
    "pair_count",
    "potential",
    "read_map",
    "read_mask",
    "read_probmap",
    "write_map",
    "write_probmap",
]
