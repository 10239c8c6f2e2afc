"""
Mean-field variational Bayes.

The lower bound maximised here is

    F(X, theta, q) = sum_i sum_s [(1 - q_is) A_is + q_is B_is] + entropy(q)
                     - beta_X * #disagreeing pairs of X
                     [- beta_H * sum_i E_q #disagreeing pairs of H_i]

with the bracketed mask-prior term present only when the q update carries the
neighbour coupling; the uncoupled update maximises F without it. Partition
functions and other constants are dropped.
"""

import logging

import numpy as np
from scipy.special import entr, expit

from apps.forward.models import ModelParams
from apps.infer.models import (
    Algorithm,
    InferenceOptions,
    InferenceState,
    VariationalPosterior,
    XUpdate,
)
from apps.infer.services.likelihood import LikelihoodTable, group_data_term
from apps.infer.services.sweep import sweep_labels
from apps.infer.services.theta import check_finite, check_subjects, initial_params, vb_update_theta
from apps.lattice.models import LabelMap
from apps.lattice.services import disagreement_count, neighbor_table

logger = logging.getLogger(__name__)


def vb_update_q(
    subject: LabelMap,
    X: LabelMap,
    params: ModelParams,
    K: int,
    q_current: np.ndarray | None = None,
    coupled: bool = False,
) -> np.ndarray:
    """
    q_is = exp(B_s) / (exp(A_s) + exp(B_s)) for one subject, shape (rows, cols).

    With ``coupled``, a raster sweep instead sets each logit to
    B_s - A_s + beta_H * sum_r (2 q_ir - 1), using ``q_current`` for voxels not yet
    visited (the uncoupled values when omitted).
    """
    table = LikelihoodTable.from_params(params, K)
    logits = table.replace(subject.values) - table.propagate(subject.values, X.values)
    if not coupled or params.beta_h == 0:
        return expit(logits)

    beta = params.beta_h
    q = (expit(logits) if q_current is None else np.asarray(q_current, dtype=float)).ravel().tolist()
    flat_logits = logits.ravel().tolist()
    for s, nbrs in enumerate(neighbor_table(X.dims)):
        local_field = sum(2.0 * q[r] - 1.0 for r in nbrs)
        q[s] = float(expit(flat_logits[s] + beta * local_field))
    return np.array(q).reshape(X.dims.shape)


def vb_update_X(
    subjects: list[LabelMap],
    q: VariationalPosterior,
    X: LabelMap,
    params: ModelParams,
    x_update: XUpdate = XUpdate.SEQUENTIAL,
) -> LabelMap:
    """
    One sweep setting each voxel to
    argmax_x sum_i (1 - q_is) A_is(x) - beta_X * sum_{r in ds} [x != X(r)].
    """
    check_subjects(subjects, X)
    K = X.K
    table = LikelihoodTable.from_params(params, K)
    data = group_data_term(subjects, 1.0 - q.values, table, K)
    labels = sweep_labels(
        data, X.values, X.dims, params.beta_x, sequential=XUpdate(x_update) == XUpdate.SEQUENTIAL
    )
    return LabelMap(labels, K)


def expected_disagreements(q: np.ndarray) -> float:
    """E #disagreeing pairs of a mask drawn voxelwise from q."""
    q = np.asarray(q, dtype=float)
    pairs = (
        (q[:, :-1], q[:, 1:]),
        (q[:-1, :], q[1:, :]),
        (q[:-1, :-1], q[1:, 1:]),
        (q[:-1, 1:], q[1:, :-1]),
    )
    return float(sum((a + b - 2.0 * a * b).sum() for a, b in pairs))


def compute_elbo(
    subjects: list[LabelMap],
    X: LabelMap,
    q: VariationalPosterior,
    params: ModelParams,
    coupled: bool = False,
) -> float:
    """
    The lower bound F for fixed (X, theta).

    The expected Ising mask prior, -beta_H times the expected number of disagreeing
    neighbour pairs under q, is only part of F when ``coupled`` is set, matching the q update,
    which has no beta_H term unless coupled.
    """
    check_subjects(subjects, X)
    table = LikelihoodTable.from_params(params, X.K)
    total = 0.0
    for subject, qi in zip(subjects, q.values):
        A = table.propagate(subject.values, X.values)
        B = table.replace(subject.values)
        total += float(((1.0 - qi) * A + qi * B).sum())
        total += float((entr(qi) + entr(1.0 - qi)).sum())
        if coupled:
            total -= params.beta_h * expected_disagreements(qi)
    return total - params.beta_x * disagreement_count(X.values)


def run_vb(subjects: list[LabelMap], X0: LabelMap, options: InferenceOptions | None = None) -> InferenceState:
    """
    Alternate q, X and (optionally) theta updates until F stalls.

    Stops once |F_t - F_{t-1}| < convergence_tol * max(1, |F_t|) or after
    ``max_iterations``.
    """
    options = options or InferenceOptions.for_vb()
    check_subjects(subjects, X0)
    K = X0.K
    coupled = options.q_prior_coupling
    state = InferenceState(algorithm=Algorithm.VB, X=X0, params=initial_params(options, K))

    for iteration in range(1, options.max_iterations + 1):
        previous_q = state.q.values if state.q is not None else [None] * len(subjects)
        state.q = VariationalPosterior(
            np.stack(
                [
                    vb_update_q(subject, state.X, state.params, K, q_current=qi, coupled=coupled)
                    for subject, qi in zip(subjects, previous_q)
                ]
            )
        )
        state.X = vb_update_X(subjects, state.q, state.X, state.params, options.x_update)
        if options.estimate_theta:
            state.params = vb_update_theta(subjects, state.X, state.q, options.model)

        elbo = compute_elbo(subjects, state.X, state.q, state.params, coupled=coupled)
        check_finite(elbo, "F", iteration, state.params)
        state.elbo_trace.append(elbo)
        state.iteration = iteration
        if options.snapshot_every and iteration % options.snapshot_every == 0:
            state.snapshots.append((iteration, state.X))
        logger.debug(f"VB iteration {iteration}: F={elbo:.6f}")

        if len(state.elbo_trace) > 1:
            delta = abs(elbo - state.elbo_trace[-2])
            if delta < options.convergence_tol * max(1.0, abs(elbo)):
                state.converged = True
                break

    logger.info(
        f"VB {'converged' if state.converged else 'stopped'} after {state.iteration} iterations "
        f"(F={state.elbo_trace[-1]:.4f}, beta_x={state.params.beta_x:.3f}, "
        f"beta_h={state.params.beta_h:.3f}, epsilon={state.params.epsilon:.4g})"
    )
    return state
