"""
Inverse-temperature estimation by maximum pseudo-likelihood.

The log pseudo-likelihood of a field is the sum over voxels of the log
conditional probability of the observed label given its neighbours. Written in
terms of neighbour label counts n_k(s):

    log PL(beta) = sum_s [ beta * n_{x_s}(s) - log sum_k exp(beta * n_k(s)) ]

It is concave in beta, so a bounded scalar search finds the maximiser or one of
the clamp boundaries.
"""

import logging
from collections.abc import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from apps.core.conf import setting
from apps.lattice.models import BinaryMask, LabelMap
from apps.lattice.services.energy import disagreement_count
from apps.lattice.services.neighbors import neighbor_label_counts

logger = logging.getLogger(__name__)


def _own_and_all_counts(values: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    counts = neighbor_label_counts(values, K).reshape(-1, K).astype(float)
    own = np.take_along_axis(counts, np.asarray(values).reshape(-1, 1), axis=1)[:, 0]
    return own, counts


def _objective(own: np.ndarray, counts: np.ndarray, beta: float) -> float:
    return float(beta * own.sum() - logsumexp(beta * counts, axis=1).sum())


def log_pseudolikelihood(field: LabelMap | BinaryMask, K: int, beta: float) -> float:
    own, counts = _own_and_all_counts(field.values, K)
    return _objective(own, counts, beta)


def _maximize(objective, beta_max: float, tol: float) -> float:
    result = minimize_scalar(
        lambda b: -objective(b), bounds=(0.0, beta_max), method="bounded", options={"xatol": tol}
    )
    best = float(result.x)
    best_value = objective(best)
    # bounded Brent never evaluates the endpoints themselves
    if objective(beta_max) >= best_value:
        return beta_max
    if objective(0.0) >= best_value:
        return 0.0
    return best


def estimate_beta_pseudolikelihood(field: LabelMap | BinaryMask, K: int) -> float:
    """
    Maximum pseudo-likelihood estimate of beta, clamped to [0, GROUPMAP_BETA_MAX].

    A field without a single disagreeing pair has a monotone increasing objective
    and returns the upper clamp.
    """
    return estimate_beta_pooled([field], K)


def estimate_beta_pooled(fields: Sequence[LabelMap | BinaryMask], K: int) -> float:
    """Single beta maximising the summed pseudo-likelihood of several fields."""
    if not fields:
        raise ValueError("At least one field is required to estimate beta")
    beta_max = float(setting("GROUPMAP_BETA_MAX", 10.0))
    tol = float(setting("GROUPMAP_BETA_TOL", 1e-4))

    if all(disagreement_count(f.values) == 0 for f in fields):
        logger.debug(f"No disagreeing pairs in {len(fields)} field(s); beta clamped to {beta_max}")
        return beta_max

    own, counts = zip(*(_own_and_all_counts(f.values, K) for f in fields))
    own = np.concatenate(own)
    counts = np.concatenate(counts)
    return _maximize(lambda b: _objective(own, counts, b), beta_max, tol)
