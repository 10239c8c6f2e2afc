"""
Parameter step shared by both algorithms.

pi and epsilon take their posterior means given expected counts; the inverse
temperatures come from pseudo-likelihood fits.
"""

import logging
import math

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import NumericalError
from apps.forward.models import GenerativeModel, ModelParams
from apps.infer.models import InferenceOptions, VariationalPosterior
from apps.lattice.models import BinaryMask, LabelMap
from apps.mrf.services import estimate_beta_pooled, estimate_beta_pseudolikelihood

logger = logging.getLogger(__name__)

# epsilon ~ Beta(1, 10)
EPSILON_PRIOR_A = 1.0
EPSILON_PRIOR_B = 10.0


def check_subjects(subjects: list[LabelMap], X: LabelMap) -> None:
    if not subjects:
        raise ValueError("Inference needs at least one subject map")
    for i, subject in enumerate(subjects):
        if subject.dims != X.dims:
            raise ValueError(f"Subject {i} is {subject.dims}, group map is {X.dims}")
        if subject.K != X.K:
            raise ValueError(f"Subject {i} has K={subject.K}, group map has K={X.K}")


def initial_params(options: InferenceOptions, K: int) -> ModelParams:
    """theta at iteration 0: the configured start, with epsilon = 0 under Model I."""
    params = options.initial_params or ModelParams.initial(K)
    if params.K != K:
        raise ValueError(f"Initial pi covers {params.K} labels, maps have K={K}")
    if options.model == GenerativeModel.MODEL_I and params.epsilon != 0:
        params = ModelParams(pi=params.pi, epsilon=0.0, beta_x=params.beta_x, beta_h=params.beta_h)
    return params


def check_finite(value: float, name: str, iteration: int, params: ModelParams) -> None:
    if not math.isfinite(value):
        raise NumericalError(
            f"{name} became {value} at iteration {iteration} "
            f"(pi={np.round(params.pi, 6).tolist()}, epsilon={params.epsilon!r}); "
            f"check the pi and epsilon floors"
        )


def update_pi(subjects: list[LabelMap], q: VariationalPosterior, K: int) -> np.ndarray:
    """pi_k = (1 + c_k) / (K + sum c), c_k the expected count of replaced voxels reading k."""
    counts = np.zeros(K)
    for subject, qi in zip(subjects, q.values):
        counts += np.bincount(subject.flat, weights=qi.ravel(), minlength=K)
    return (1.0 + counts) / (K + counts.sum())


def update_epsilon(subjects: list[LabelMap], X: LabelMap, q: VariationalPosterior) -> float:
    """
    epsilon = (1 + m) / (11 + t) over propagated mass t and its mismatches m,
    clamped to [GROUPMAP_EPSILON_MIN, GROUPMAP_EPSILON_MAX].
    """
    propagated = 1.0 - q.values
    t = float(propagated.sum())
    prior_mean = EPSILON_PRIOR_A / (EPSILON_PRIOR_A + EPSILON_PRIOR_B)
    if t <= 0:
        logger.warning(f"No propagated mass left; epsilon falls back to its prior mean {prior_mean:.4f}")
        return prior_mean
    mismatched = np.stack([s.values != X.values for s in subjects])
    m = float((propagated * mismatched).sum())
    epsilon = (EPSILON_PRIOR_A + m) / (EPSILON_PRIOR_A + EPSILON_PRIOR_B + t)
    low = setting("GROUPMAP_EPSILON_MIN", 1e-6)
    high = setting("GROUPMAP_EPSILON_MAX", 0.5)
    return float(min(max(epsilon, low), high))


def vb_update_theta(
    subjects: list[LabelMap],
    X: LabelMap,
    q: VariationalPosterior,
    model: GenerativeModel = GenerativeModel.MODEL_II,
) -> ModelParams:
    """
    Re-estimate theta from the current group map and mask posterior.

    beta_H is fitted jointly on all subjects' masks after thresholding q at 0.5.
    Model I has no label noise, so its epsilon stays 0.
    """
    check_subjects(subjects, X)
    K = X.K
    pi = update_pi(subjects, q, K)
    epsilon = update_epsilon(subjects, X, q) if GenerativeModel(model) == GenerativeModel.MODEL_II else 0.0
    beta_x = estimate_beta_pseudolikelihood(X, K)
    beta_h = estimate_beta_pooled(q.thresholded(), 2)
    return ModelParams(pi=pi, epsilon=epsilon, beta_x=beta_x, beta_h=beta_h)


def icm_update_theta(
    subjects: list[LabelMap],
    X: LabelMap,
    masks: list[BinaryMask],
    model: GenerativeModel = GenerativeModel.MODEL_II,
) -> ModelParams:
    """The parameter step of coordinate ascent: the variational step on hard masks."""
    return vb_update_theta(subjects, X, VariationalPosterior.from_masks(masks), model)
