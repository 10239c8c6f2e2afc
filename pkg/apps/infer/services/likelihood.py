"""
Per-voxel log-likelihood terms.

For subject label y at a voxel whose group label is x:

    A = log(1 - epsilon)           if y == x   (mask 0: label propagated)
        log(epsilon / (K - 1))     otherwise
    B = log pi_y                                (mask 1: label replaced)

pi is floored at GROUPMAP_PI_FLOOR and renormalised, and epsilon is clamped to
[GROUPMAP_EPSILON_MIN, GROUPMAP_EPSILON_MAX], so every term is finite. Model I
parameters carry epsilon = 0 and therefore run at the lower clamp.
"""

from dataclasses import dataclass

import numpy as np

from apps.core.conf import setting
from apps.forward.models import ModelParams
from apps.lattice.models import LabelMap


def floored_pi(pi: np.ndarray) -> np.ndarray:
    pi = np.maximum(np.asarray(pi, dtype=float), setting("GROUPMAP_PI_FLOOR", 1e-8))
    return pi / pi.sum()


def clamped_epsilon(epsilon: float) -> float:
    low = setting("GROUPMAP_EPSILON_MIN", 1e-6)
    high = setting("GROUPMAP_EPSILON_MAX", 0.5)
    return float(min(max(epsilon, low), high))


@dataclass(frozen=True)
class LikelihoodTable:
    """The three distinct log-probabilities a parameter set implies."""

    log_match: float
    log_mismatch: float
    log_pi: np.ndarray

    @classmethod
    def from_params(cls, params: ModelParams, K: int | None = None) -> "LikelihoodTable":
        K = params.K if K is None else K
        if params.K != K:
            raise ValueError(f"pi covers {params.K} labels, expected K={K}")
        epsilon = clamped_epsilon(params.epsilon)
        return cls(
            log_match=float(np.log1p(-epsilon)),
            log_mismatch=float(np.log(epsilon / (K - 1))),
            log_pi=np.log(floored_pi(params.pi)),
        )

    def propagate(self, subject: np.ndarray, group: np.ndarray) -> np.ndarray:
        """A for every voxel."""
        return np.where(np.asarray(subject) == np.asarray(group), self.log_match, self.log_mismatch)

    def replace(self, subject: np.ndarray) -> np.ndarray:
        """B for every voxel."""
        return self.log_pi[np.asarray(subject)]


def log_lik_terms(y: int, x: int, params: ModelParams, K: int) -> tuple[float, float]:
    """Return (A, B) for one voxel."""
    if not (0 <= y < K and 0 <= x < K):
        raise ValueError(f"Labels ({y}, {x}) out of range for K={K}")
    table = LikelihoodTable.from_params(params, K)
    A = table.log_match if y == x else table.log_mismatch
    return A, float(table.log_pi[y])


def group_data_term(subjects: list[LabelMap], weights: np.ndarray, table: LikelihoodTable, K: int) -> np.ndarray:
    """
    Likelihood part of the group-map objective, shape (N, K).

    Entry [s, x] is sum_i weights[i, s] * A_is(x), where ``weights`` is 1 - q for
    variational updates and the indicator of H = 0 for coordinate ascent.
    """
    weights = np.asarray(weights, dtype=float).reshape(len(subjects), -1)
    n = weights.shape[1]
    matched = np.zeros((n, K))
    voxels = np.arange(n)
    for subject, w in zip(subjects, weights):
        matched[voxels, subject.flat] += w
    gap = table.log_match - table.log_mismatch
    return table.log_mismatch * weights.sum(axis=0)[:, None] + gap * matched
