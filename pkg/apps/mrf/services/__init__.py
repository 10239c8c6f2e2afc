"""
MRF services: Potts/Ising simulation and inverse-temperature estimation.
"""

from .gibbs import (
    PottsGibbsSampler,
    conditional_distribution,
    enumerate_potts,
    potts_log_weight,
    sample_ising,
    sample_potts,
)
from .pseudolikelihood import (
    estimate_beta_pooled,
    estimate_beta_pseudolikelihood,
    log_pseudolikelihood,
)

__all__ = [
    "PottsGibbsSampler",
    "conditional_distribution",
    "enumerate_potts",
    "estimate_beta_pooled",
    "estimate_beta_pseudolikelihood",
    "log_pseudolikelihood",
    "potts_log_weight",
    "sample_ising",
    "sample_potts",
]
