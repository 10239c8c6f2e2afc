"""
MRF simulation parameters.
"""

from dataclasses import dataclass, field

from apps.core.conf import setting
from apps.lattice.models import LatticeDims


def _default_sweeps() -> int:
    return setting("GROUPMAP_GIBBS_SWEEPS", 100)


@dataclass(frozen=True)
class MrfSpec:
    """A Potts field to simulate: lattice, label count, inverse temperature, sweeps, seed."""

    dims: LatticeDims
    K: int
    beta: float
    sweeps: int = field(default_factory=_default_sweeps)
    seed: int = 0

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"Label count K must be at least 2, got {self.K}")
        if self.beta < 0:
            raise ValueError(f"Inverse temperature must be non-negative, got {self.beta}")
        if self.sweeps < 1:
            raise ValueError(f"At least one Gibbs sweep is required, got {self.sweeps}")
