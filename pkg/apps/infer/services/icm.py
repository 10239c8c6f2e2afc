"""
Coordinate ascent on the joint posterior (iterated conditional modes).

Each sweep maximises, one voxel at a time, the unnormalised joint

    log P(Y, X, H | theta) = sum_i sum_s [1(H_is = 0) A_is + 1(H_is = 1) B_is]
                             - beta_X * #disagreeing pairs of X
                             - beta_H * sum_i #disagreeing pairs of H_i

over the masks H and then over the group map X.
"""

import logging

import numpy as np

from apps.forward.models import ModelParams
from apps.infer.models import Algorithm, InferenceOptions, InferenceState, XUpdate
from apps.infer.services.likelihood import LikelihoodTable, group_data_term
from apps.infer.services.sweep import sweep_labels
from apps.infer.services.theta import check_finite, check_subjects, icm_update_theta, initial_params
from apps.lattice.models import BinaryMask, LabelMap
from apps.lattice.services import disagreement_count

logger = logging.getLogger(__name__)


def icm_update_H(subject: LabelMap, X: LabelMap, params: ModelParams, H_current: BinaryMask) -> BinaryMask:
    """One raster sweep of argmax_h [1(h=0) A_s + 1(h=1) B_s - beta_H * sum_r [h != H(r)]]."""
    if subject.dims != X.dims or H_current.dims != X.dims:
        raise ValueError("Subject, group map and mask must share the lattice")
    table = LikelihoodTable.from_params(params, X.K)
    data = np.stack(
        [table.propagate(subject.values, X.values).ravel(), table.replace(subject.values).ravel()],
        axis=1,
    )
    return BinaryMask(sweep_labels(data, H_current.values, X.dims, params.beta_h))


def icm_update_X(
    subjects: list[LabelMap],
    masks: list[BinaryMask],
    X: LabelMap,
    params: ModelParams,
    x_update: XUpdate = XUpdate.SEQUENTIAL,
) -> LabelMap:
    """The variational group-map update with 1 - q replaced by the indicator of H = 0."""
    check_subjects(subjects, X)
    if len(masks) != len(subjects):
        raise ValueError(f"{len(masks)} masks for {len(subjects)} subjects")
    K = X.K
    table = LikelihoodTable.from_params(params, K)
    propagated = np.stack([1 - m.values for m in masks]).astype(float)
    data = group_data_term(subjects, propagated, table, K)
    labels = sweep_labels(
        data, X.values, X.dims, params.beta_x, sequential=XUpdate(x_update) == XUpdate.SEQUENTIAL
    )
    return LabelMap(labels, K)


def joint_log_posterior(
    subjects: list[LabelMap], X: LabelMap, masks: list[BinaryMask], params: ModelParams
) -> float:
    """Unnormalised log P(Y, X, H | theta); partition functions are dropped."""
    check_subjects(subjects, X)
    table = LikelihoodTable.from_params(params, X.K)
    total = 0.0
    for subject, mask in zip(subjects, masks):
        A = table.propagate(subject.values, X.values)
        B = table.replace(subject.values)
        total += float(np.where(mask.values == 1, B, A).sum())
        total -= params.beta_h * disagreement_count(mask.values)
    return total - params.beta_x * disagreement_count(X.values)


def run_icm(
    subjects: list[LabelMap],
    X0: LabelMap,
    options: InferenceOptions | None = None,
    masks0: list[BinaryMask] | None = None,
) -> InferenceState:
    """
    Alternate mask, group-map and (optionally) theta steps.

    Masks start at ``masks0`` (all zero by default). Stops when fewer than
    ``convergence_tol`` labels changed in a sweep or after ``max_iterations``.
    """
    options = options or InferenceOptions.for_icm()
    check_subjects(subjects, X0)
    dims = X0.dims
    masks = list(masks0) if masks0 is not None else [BinaryMask.zeros(dims) for _ in subjects]
    if len(masks) != len(subjects):
        raise ValueError(f"{len(masks)} initial masks for {len(subjects)} subjects")
    state = InferenceState(
        algorithm=Algorithm.ICM, X=X0, params=initial_params(options, X0.K), masks=masks
    )

    for iteration in range(1, options.max_iterations + 1):
        new_masks = [
            icm_update_H(subject, state.X, state.params, H) for subject, H in zip(subjects, state.masks)
        ]
        new_X = icm_update_X(subjects, new_masks, state.X, state.params, options.x_update)
        changes = int((new_X.values != state.X.values).sum()) + sum(
            int((new.values != old.values).sum()) for new, old in zip(new_masks, state.masks)
        )
        state.masks, state.X = new_masks, new_X
        if options.estimate_theta:
            state.params = icm_update_theta(subjects, state.X, state.masks, options.model)

        log_posterior = joint_log_posterior(subjects, state.X, state.masks, state.params)
        check_finite(log_posterior, "log posterior", iteration, state.params)
        state.log_posterior_trace.append(log_posterior)
        state.iteration = iteration
        if options.snapshot_every and iteration % options.snapshot_every == 0:
            state.snapshots.append((iteration, state.X))
        logger.debug(f"ICM iteration {iteration}: {changes} labels changed, log posterior={log_posterior:.6f}")

        if changes < options.convergence_tol:
            state.converged = True
            break

    logger.info(
        f"ICM {'converged' if state.converged else 'stopped'} after {state.iteration} iterations "
        f"(log posterior={state.log_posterior_trace[-1]:.4f})"
    )
    return state
