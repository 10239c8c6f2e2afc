"""
Tests for inference services (likelihood terms, variational Bayes, coordinate ascent).
"""

import json

import numpy as np
import pytest

from apps.core.exceptions import NumericalError
from apps.forward.models import GenerativeModel, ModelParams
from apps.forward.services import generate_dataset
from apps.infer.models import Algorithm, InferenceOptions, VariationalPosterior, XUpdate
from apps.infer.services import (
    compute_elbo,
    icm_update_H,
    icm_update_theta,
    icm_update_X,
    init_greedy,
    init_random,
    joint_log_posterior,
    log_lik_terms,
    run_icm,
    run_vb,
    save_result,
    vb_update_q,
    vb_update_theta,
    vb_update_X,
)
from apps.infer.services.sweep import sweep_labels
from apps.infer.services.vb import expected_disagreements
from apps.infer.tests.oracle import ORACLE_PARAMS, Enumeration, make_instance
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims
from apps.lattice.services import neighbors, read_map, read_probmap


def random_problem(rng, M, K, dims):
    subjects = [LabelMap(rng.integers(0, K, size=dims.shape), K) for _ in range(M)]
    X = LabelMap(rng.integers(0, K, size=dims.shape), K)
    q = VariationalPosterior(rng.random((M, *dims.shape)))
    params = ModelParams(
        pi=rng.dirichlet(np.ones(K)), epsilon=rng.uniform(0.01, 0.3), beta_x=rng.uniform(0, 1), beta_h=rng.uniform(0, 1)
    )
    return subjects, X, q, params


def brute_force_sweep(subjects, weights, X, params, sequential=True):
    """Raster argmax evaluated term by term."""
    K = X.K
    dims = X.dims
    previous = X.flat.tolist()
    current = list(previous)
    for s in range(dims.n_voxels):
        scores = []
        for x in range(K):
            score = 0.0
            for subject, w in zip(subjects, weights):
                A, _ = log_lik_terms(int(subject.flat[s]), x, params, K)
                score += w.ravel()[s] * A
            context = current if sequential else previous
            score -= params.beta_x * sum(1 for r in neighbors(s, dims) if context[r] != x)
            scores.append(score)
        current[s] = int(np.argmax(scores))
    return current


class TestInitialization:
    """Tests for init_random and init_greedy."""

    def test_random_frequencies(self):
        """Test uniform label frequencies on 64x64, K = 10."""
        X = init_random(LatticeDims(64, 64), 10, seed=1)
        frequencies = np.bincount(X.flat, minlength=10) / X.flat.size
        assert np.all(np.abs(frequencies - 0.1) <= 0.03)

    def test_random_deterministic(self):
        """Test the same seed gives the same map."""
        assert init_random(LatticeDims(8, 8), 4, seed=3) == init_random(LatticeDims(8, 8), 4, seed=3)

    def test_random_single_voxel(self):
        """Test a 1x1, K = 2 initialisation."""
        assert init_random(LatticeDims(1, 1), 2, seed=0).flat[0] in (0, 1)

    @pytest.mark.parametrize(
        "values,expected",
        [((2, 2, 5), 2), ((0, 0, 0), 0), ((0, 7, 0), 7), ((3, 0, 4), 3), ((0, 5, 5), 5)],
    )
    def test_greedy_voxel_rule(self, values, expected):
        """Test the most frequent nonzero label wins, all-zero gives 0."""
        subjects = [LabelMap(np.array([[v]]), 10) for v in values]
        assert init_greedy(subjects).flat[0] == expected

    def test_greedy_requires_subjects(self):
        """Test an empty subject list."""
        with pytest.raises(ValueError):
            init_greedy([])


class TestLogLikTerms:
    """Tests for the per-voxel A and B terms."""

    def test_match(self, uniform_params_k10):
        """Test A = log 0.99 when y == x."""
        A, _ = log_lik_terms(3, 3, uniform_params_k10, 10)
        assert A == pytest.approx(-0.01005, abs=1e-5)

    def test_mismatch(self, uniform_params_k10):
        """Test A = log(0.01 / 9) when y != x."""
        A, _ = log_lik_terms(3, 4, uniform_params_k10, 10)
        assert A == pytest.approx(-6.8024, abs=1e-4)

    def test_replacement(self):
        """Test B = log 0.25 under uniform pi over 4 labels."""
        params = ModelParams(pi=np.full(4, 0.25), epsilon=0.01, beta_x=0, beta_h=0)
        for y in range(4):
            assert log_lik_terms(y, 0, params, 4)[1] == pytest.approx(-1.3863, abs=1e-4)

    def test_floors_keep_terms_finite(self):
        """Test pi = 0 and epsilon = 0 still give finite terms."""
        params = ModelParams(pi=[1.0, 0.0], epsilon=0.0, beta_x=0, beta_h=0)
        A, B = log_lik_terms(1, 0, params, 2)
        assert np.isfinite(A) and np.isfinite(B)


class TestVbUpdateQ:
    """Tests for the mask posterior update."""

    def test_balanced_terms(self):
        """Test A == B gives q = 0.5."""
        params = ModelParams(pi=[0.9, 0.1], epsilon=0.1, beta_x=0, beta_h=0)
        zero = LabelMap(np.zeros((1, 1)), 2)
        assert vb_update_q(zero, zero, params, 2)[0, 0] == pytest.approx(0.5)

    def test_match(self, uniform_params_k10):
        """Test q = 0.1 / (0.99 + 0.1) where the subject agrees."""
        X = LabelMap(np.array([[4]]), 10)
        assert vb_update_q(X, X, uniform_params_k10, 10)[0, 0] == pytest.approx(0.1 / 1.09)

    def test_mismatch(self, uniform_params_k10):
        """Test q = 0.1 / (0.01 / 9 + 0.1) where the subject disagrees."""
        q = vb_update_q(LabelMap(np.array([[5]]), 10), LabelMap(np.array([[4]]), 10), uniform_params_k10, 10)
        assert q[0, 0] == pytest.approx(0.1 / (0.01 / 9 + 0.1))
        assert q[0, 0] == pytest.approx(0.9890, abs=1e-4)

    def test_range(self, rng):
        """Test q stays in [0, 1] for extreme parameters."""
        params = ModelParams(pi=[1.0, 0.0, 0.0], epsilon=0.0, beta_x=0, beta_h=0)
        subject = LabelMap(rng.integers(0, 3, size=(5, 5)), 3)
        q = vb_update_q(subject, LabelMap(rng.integers(0, 3, size=(5, 5)), 3), params, 3)
        assert np.all((q >= 0) & (q <= 1))

    def test_coupling_pulls_towards_neighbours(self):
        """Test the coupled update moves q towards confident neighbours."""
        params = ModelParams(pi=[0.5, 0.5], epsilon=0.1, beta_x=0, beta_h=1.0)
        X = LabelMap(np.zeros((3, 3)), 2)
        plain = vb_update_q(X, X, params, 2)
        coupled = vb_update_q(X, X, params, 2, q_current=np.ones((3, 3)), coupled=True)
        assert coupled[0, 0] > plain[0, 0]

    def test_coupling_without_beta_is_plain(self, binary_params, rng):
        """Test beta_H = 0 makes the coupled update the plain one."""
        params = ModelParams(pi=binary_params.pi, epsilon=0.1, beta_x=0.5, beta_h=0.0)
        subject = LabelMap(rng.integers(0, 2, size=(4, 4)), 2)
        X = LabelMap(rng.integers(0, 2, size=(4, 4)), 2)
        assert np.array_equal(vb_update_q(subject, X, params, 2, coupled=True), vb_update_q(subject, X, params, 2))


class TestVbUpdateX:
    """Tests for the group-map update."""

    def test_copies_single_subject(self, rng):
        """Test M = 1, q = 0, beta_X = 0 reproduces the subject."""
        params = ModelParams(pi=np.full(5, 0.2), epsilon=0.05, beta_x=0.0, beta_h=0.5)
        subject = LabelMap(rng.integers(0, 5, size=(6, 6)), 5)
        X = LabelMap(rng.integers(0, 5, size=(6, 6)), 5)
        q = VariationalPosterior.constant(1, subject.dims, 0.0)
        assert vb_update_X([subject], q, X, params) == subject

    def test_pure_smoothing(self):
        """Test q = 1 leaves only the Potts term."""
        params = ModelParams(pi=[0.5, 0.5], epsilon=0.05, beta_x=0.8, beta_h=0.5)
        values = np.zeros((3, 3), dtype=int)
        values[1, 1] = 1
        X = LabelMap(values, 2)
        subject = LabelMap(np.ones((3, 3)), 2)
        q = VariationalPosterior.constant(1, X.dims, 1.0)

        smoothed = vb_update_X([subject], q, X, params)
        assert smoothed == LabelMap(np.zeros((3, 3)), 2)
        assert smoothed.values.tolist() == sweep_labels(np.zeros((9, 2)), X.values, X.dims, 0.8).tolist()

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        """Test a 2x2, M = 2, K = 2 sweep against term-by-term evaluation."""
        rng = np.random.default_rng(seed)
        subjects, X, q, _ = random_problem(rng, 2, 2, LatticeDims(2, 2))
        params = ModelParams(pi=[0.3, 0.7], epsilon=0.2, beta_x=0.5, beta_h=0.3)
        updated = vb_update_X(subjects, q, X, params)
        assert updated.flat.tolist() == brute_force_sweep(subjects, 1.0 - q.values, X, params)

    @pytest.mark.parametrize("seed", range(5))
    def test_hard_posterior_equals_icm(self, seed):
        """Test 0/1-valued q gives the coordinate-ascent update."""
        rng = np.random.default_rng(seed)
        subjects, X, _, params = random_problem(rng, 3, 4, LatticeDims(6, 5))
        masks = [BinaryMask(rng.integers(0, 2, size=(6, 5))) for _ in subjects]
        q = VariationalPosterior.from_masks(masks)
        assert vb_update_X(subjects, q, X, params) == icm_update_X(subjects, masks, X, params)

    def test_label_permutation_equivariance(self, rng):
        """Test relabelling Y, X and pi relabels the output."""
        subjects, X, q, params = random_problem(rng, 3, 4, LatticeDims(5, 5))
        permutation = np.array([2, 3, 1, 0])
        pi = np.empty(4)
        pi[permutation] = params.pi
        permuted_params = ModelParams(pi=pi, epsilon=params.epsilon, beta_x=params.beta_x, beta_h=params.beta_h)

        original = vb_update_X(subjects, q, X, params)
        permuted = vb_update_X([s.relabel(permutation) for s in subjects], q, X.relabel(permutation), permuted_params)
        assert permuted == original.relabel(permutation)

    def test_simultaneous_uses_previous_map(self, rng):
        """Test the Jacobi update reads every neighbour from the old map."""
        subjects, X, q, params = random_problem(rng, 2, 3, LatticeDims(4, 4))
        updated = vb_update_X(subjects, q, X, params, XUpdate.SIMULTANEOUS)
        expected = brute_force_sweep(subjects, 1.0 - q.values, X, params, sequential=False)
        assert updated.flat.tolist() == expected


class TestVbUpdateTheta:
    """Tests for the variational parameter step."""

    def test_pi_posterior_mean(self):
        """Test pi_2 = (1 + MN) / (3 + MN) when every voxel is replaced by label 2."""
        dims = LatticeDims(4, 4)
        subjects = [LabelMap(np.full(dims.shape, 2), 3)] * 2
        q = VariationalPosterior.constant(2, dims, 1.0)
        params = vb_update_theta(subjects, LabelMap(np.zeros(dims.shape), 3), q)

        MN = 2 * 16
        assert params.pi[2] == pytest.approx((1 + MN) / (3 + MN))
        assert params.pi[0] == pytest.approx(1 / (3 + MN))

    def test_epsilon_without_mismatches(self):
        """Test epsilon = 1 / (11 + MN) when every subject equals X and q = 0."""
        X = LabelMap(np.arange(20).reshape(4, 5) % 3, 3)
        q = VariationalPosterior.constant(3, X.dims, 0.0)
        params = vb_update_theta([X, X, X], X, q)
        assert params.epsilon == pytest.approx(1 / (11 + 60))

    def test_epsilon_prior_fallback(self):
        """Test no propagated mass gives epsilon = 1 / 11."""
        X = LabelMap(np.zeros((3, 3)), 2)
        q = VariationalPosterior.constant(1, X.dims, 1.0)
        assert vb_update_theta([X], X, q).epsilon == pytest.approx(1 / 11)

    def test_model1_keeps_zero_epsilon(self, rng):
        """Test Model I inference never estimates label noise."""
        subjects, X, q, _ = random_problem(rng, 2, 3, LatticeDims(4, 4))
        assert vb_update_theta(subjects, X, q, GenerativeModel.MODEL_I).epsilon == 0.0

    def test_constant_map_clamps_beta(self):
        """Test a constant group map gives the upper beta clamp."""
        X = LabelMap(np.zeros((5, 5)), 2)
        q = VariationalPosterior.constant(1, X.dims, 0.2)
        assert vb_update_theta([X], X, q).beta_x == 10.0

    def test_icm_theta_equals_hard_vb(self, rng):
        """Test the coordinate-ascent step is the variational step on hard masks."""
        subjects, X, _, _ = random_problem(rng, 2, 3, LatticeDims(6, 6))
        masks = [BinaryMask(rng.integers(0, 2, size=(6, 6))) for _ in subjects]
        assert icm_update_theta(subjects, X, masks) == vb_update_theta(
            subjects, X, VariationalPosterior.from_masks(masks)
        )


class TestComputeElbo:
    """Tests for the variational lower bound."""

    def test_perfect_fit_limit(self):
        """Test F approaches 0 from below for a noiseless perfect fit."""
        X = LabelMap(np.arange(16).reshape(4, 4) % 3, 3)
        params = ModelParams(pi=np.full(3, 1 / 3), epsilon=1e-6, beta_x=0.0, beta_h=0.0)
        F = compute_elbo([X, X], X, VariationalPosterior.constant(2, X.dims, 0.0), params)
        assert -1e-3 < F < 0

    @pytest.mark.parametrize("seed", range(3))
    def test_mask_prior_only_when_coupled(self, seed):
        """Test the coupled bound subtracts beta_H times the expected mask disagreements."""
        rng = np.random.default_rng(seed)
        subjects, X, q, params = random_problem(rng, 2, 3, LatticeDims(5, 5))
        plain = compute_elbo(subjects, X, q, params)
        coupled = compute_elbo(subjects, X, q, params, coupled=True)
        penalty = sum(expected_disagreements(qi) for qi in q.values)
        assert coupled == pytest.approx(plain - params.beta_h * penalty, rel=1e-12, abs=1e-9)
        assert coupled < plain

    @pytest.mark.parametrize("seed", range(5))
    def test_single_steps_increase_f(self, seed):
        """Test the q step and the X step each never decrease F."""
        rng = np.random.default_rng(seed)
        subjects, X, q, params = random_problem(rng, 3, 4, LatticeDims(7, 7))
        before = compute_elbo(subjects, X, q, params)
        q_new = VariationalPosterior(np.stack([vb_update_q(s, X, params, 4) for s in subjects]))
        after_q = compute_elbo(subjects, X, q_new, params)
        X_new = vb_update_X(subjects, q_new, X, params)
        after_x = compute_elbo(subjects, X_new, q_new, params)
        assert after_q >= before - 1e-9
        assert after_x >= after_q - 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_jensen_bound(self, seed):
        """Test F <= log sum_H P(Y, X, H | theta) on 2x2, K = 2, M = 1."""
        rng = np.random.default_rng(seed)
        subjects = make_instance(seed, M=1)
        oracle = Enumeration(subjects, ORACLE_PARAMS)
        log_marginal = oracle.log_marginal_X()
        for k, X in enumerate(oracle.group_maps):
            q = VariationalPosterior(rng.random((1, 2, 2)))
            assert compute_elbo(subjects, X, q, ORACLE_PARAMS, coupled=True) <= log_marginal[k] + 1e-12


class TestRunVb:
    """Tests for the variational Bayes loop."""

    def test_fixed_point(self):
        """Test identical subjects converge quickly and leave X unchanged."""
        from apps.mrf.models import MrfSpec
        from apps.mrf.services import sample_potts

        X0 = sample_potts(MrfSpec(dims=LatticeDims(10, 10), K=4, beta=0.8, sweeps=10, seed=2))
        options = InferenceOptions.for_vb(
            estimate_theta=False,
            initial_params=ModelParams(pi=np.full(4, 0.25), epsilon=0.01, beta_x=0.5, beta_h=0.5),
        )
        state = run_vb([X0] * 5, X0, options)

        assert state.converged
        assert state.iteration <= 3
        assert state.X == X0

    @pytest.mark.parametrize("seed", range(50))
    def test_elbo_monotone_with_fixed_theta(self, seed):
        """Test every consecutive F pair is non-decreasing when theta is held fixed."""
        rng = np.random.default_rng(1000 + seed)
        M = int(rng.integers(1, 6))
        K = int(rng.integers(2, 7))
        dims = LatticeDims(int(rng.integers(2, 33)), int(rng.integers(2, 33)))
        subjects, _, _, params = random_problem(rng, M, K, dims)
        options = InferenceOptions.for_vb(
            estimate_theta=False, initial_params=params, q_prior_coupling=bool(seed % 3 == 0), max_iterations=30
        )
        state = run_vb(subjects, init_random(dims, K, seed), options)
        trace = np.array(state.elbo_trace)
        assert np.all(np.diff(trace) >= -1e-9)

    def test_estimated_theta_run(self):
        """Test a full run with theta estimation on generated data."""
        dataset = generate_dataset(5, 3, LatticeDims(12, 12), GenerativeModel.MODEL_II, sweeps=10, seed=4)
        state = run_vb(dataset.subjects, init_greedy(dataset.subjects), InferenceOptions.for_vb(max_iterations=20))

        assert state.algorithm == Algorithm.VB
        assert len(state.elbo_trace) == state.iteration
        assert np.all(np.isfinite(state.elbo_trace))
        assert np.all((state.q.values >= 0) & (state.q.values <= 1))

    def test_snapshots(self, rng):
        """Test snapshots are taken every k iterations."""
        subjects, _, _, params = random_problem(rng, 2, 3, LatticeDims(5, 5))
        options = InferenceOptions.for_vb(
            estimate_theta=False, initial_params=params, snapshot_every=2, max_iterations=5, convergence_tol=1e-300
        )
        state = run_vb(subjects, init_random(LatticeDims(5, 5), 3, 0), options)
        assert [k for k, _ in state.snapshots] == [k for k in range(1, state.iteration + 1) if k % 2 == 0]

    def test_non_finite_bound_aborts(self, rng, monkeypatch):
        """Test a non-finite F raises NumericalError."""
        monkeypatch.setattr("apps.infer.services.vb.compute_elbo", lambda *args, **kwargs: float("nan"))
        subjects, X, _, _ = random_problem(rng, 1, 2, LatticeDims(3, 3))
        with pytest.raises(NumericalError) as exc_info:
            run_vb(subjects, X)
        assert "iteration 1" in str(exc_info.value)

    def test_dims_mismatch(self, rng):
        """Test subjects and X0 must share the lattice."""
        with pytest.raises(ValueError):
            run_vb([LabelMap(np.zeros((2, 2)), 2)], LabelMap(np.zeros((3, 3)), 2))


class TestIcm:
    """Tests for coordinate ascent."""

    def test_uncoupled_mask_rule(self, rng):
        """Test beta_H = 0 sets H = 1 exactly where B > A."""
        params = ModelParams(pi=[0.2, 0.3, 0.5], epsilon=0.3, beta_x=0.5, beta_h=0.0)
        subject = LabelMap(rng.integers(0, 3, size=(6, 6)), 3)
        X = LabelMap(rng.integers(0, 3, size=(6, 6)), 3)
        H = icm_update_H(subject, X, params, BinaryMask.zeros(X.dims))
        for s in range(36):
            A, B = log_lik_terms(int(subject.flat[s]), int(X.flat[s]), params, 3)
            assert H.flat[s] == int(B > A)

    def test_agreement_gives_empty_masks(self, uniform_params_k10, rng):
        """Test Y == X with small epsilon and uniform pi sets every mask voxel to 0."""
        X = LabelMap(rng.integers(0, 10, size=(8, 8)), 10)
        assert icm_update_H(X, X, uniform_params_k10, BinaryMask.ones(X.dims)) == BinaryMask.zeros(X.dims)

    @pytest.mark.parametrize("seed", range(5))
    def test_mask_sweep_matches_brute_force(self, seed):
        """Test a 2x2 mask sweep against term-by-term evaluation."""
        rng = np.random.default_rng(seed)
        params = ModelParams(pi=[0.35, 0.65], epsilon=0.25, beta_x=0.5, beta_h=0.7)
        subject = LabelMap(rng.integers(0, 2, size=(2, 2)), 2)
        X = LabelMap(rng.integers(0, 2, size=(2, 2)), 2)
        H = BinaryMask(rng.integers(0, 2, size=(2, 2)))

        current = H.flat.tolist()
        for s in range(4):
            A, B = log_lik_terms(int(subject.flat[s]), int(X.flat[s]), params, 2)
            scores = [
                (A if h == 0 else B) - params.beta_h * sum(1 for r in neighbors(s, X.dims) if current[r] != h)
                for h in (0, 1)
            ]
            current[s] = int(np.argmax(scores))
        assert icm_update_H(subject, X, params, H).flat.tolist() == current

    def test_full_masks_smooth(self):
        """Test all-one masks leave pure Potts smoothing."""
        params = ModelParams(pi=[0.5, 0.5], epsilon=0.1, beta_x=1.0, beta_h=0.5)
        values = np.ones((3, 3), dtype=int)
        values[0, 0] = 0
        X = LabelMap(values, 2)
        masks = [BinaryMask.ones(X.dims)]
        assert icm_update_X([LabelMap(np.zeros((3, 3)), 2)], masks, X, params) == LabelMap(np.ones((3, 3)), 2)

    def test_empty_masks_copy_subject(self, rng):
        """Test all-zero masks, M = 1, beta_X = 0 reproduce the subject."""
        params = ModelParams(pi=np.full(4, 0.25), epsilon=0.1, beta_x=0.0, beta_h=0.5)
        subject = LabelMap(rng.integers(0, 4, size=(5, 5)), 4)
        X = LabelMap(rng.integers(0, 4, size=(5, 5)), 4)
        assert icm_update_X([subject], [BinaryMask.zeros(X.dims)], X, params) == subject

    @pytest.mark.parametrize("seed", range(10))
    def test_log_posterior_monotone(self, seed):
        """Test the joint log posterior never decreases with theta fixed."""
        rng = np.random.default_rng(2000 + seed)
        dims = LatticeDims(int(rng.integers(3, 17)), int(rng.integers(3, 17)))
        subjects, _, _, params = random_problem(rng, int(rng.integers(1, 5)), int(rng.integers(2, 6)), dims)
        options = InferenceOptions.for_icm(estimate_theta=False, initial_params=params)
        X0 = init_random(dims, subjects[0].K, seed)
        start = joint_log_posterior(subjects, X0, [BinaryMask.zeros(dims)] * len(subjects), params)
        state = run_icm(subjects, X0, options)

        trace = np.array([start, *state.log_posterior_trace])
        assert np.all(np.diff(trace) >= -1e-9)

    def test_estimated_theta_run(self):
        """Test a full run with theta estimation and snapshots."""
        dataset = generate_dataset(4, 3, LatticeDims(10, 10), GenerativeModel.MODEL_I, sweeps=10, seed=8)
        options = InferenceOptions.for_icm(model=GenerativeModel.MODEL_I, snapshot_every=1, max_iterations=10)
        state = run_icm(dataset.subjects, init_greedy(dataset.subjects), options)

        assert state.algorithm == Algorithm.ICM
        assert len(state.masks) == 4
        assert state.params.epsilon == 0.0
        assert len(state.snapshots) == state.iteration


class TestEnumerationOracle:
    """Tests against exhaustive enumeration on 2x2, K = 2, M = 2 instances."""

    SEEDS = range(20)

    @pytest.fixture(scope="class")
    def oracles(self):
        return {seed: Enumeration(make_instance(seed), ORACLE_PARAMS) for seed in self.SEEDS}

    def _fixed_options(self, **kwargs):
        return {"estimate_theta": False, "initial_params": ORACLE_PARAMS, **kwargs}

    def test_icm_never_beats_joint_map(self, oracles):
        """Test the exhaustive MAP log posterior bounds what coordinate ascent reaches."""
        for seed, oracle in oracles.items():
            _, _, best = oracle.joint_map()
            for init in (init_random(oracle.group_maps[0].dims, 2, seed), init_greedy(oracle.subjects)):
                state = run_icm(oracle.subjects, init, InferenceOptions.for_icm(**self._fixed_options()))
                assert best >= state.log_posterior_trace[-1]

    def test_joint_map_group_maps(self, oracles):
        """Test the tied joint MAP group maps include the argmax and exclude some maps."""
        for oracle in oracles.values():
            X_map, _, _ = oracle.joint_map()
            tied = oracle.joint_map_group_maps()
            assert any(X == X_map for X in tied)
            assert len(tied) < len(oracle.group_maps)

    def test_vb_finds_map_group_map(self, oracles):
        """Test the variational group map equals the joint MAP group map on at least 18 of 20 instances."""
        hits = 0
        for oracle in oracles.values():
            state = run_vb(
                oracle.subjects, init_greedy(oracle.subjects), InferenceOptions.for_vb(**self._fixed_options())
            )
            hits += any(state.X == X for X in oracle.joint_map_group_maps())
        assert hits >= 18

    def test_vb_mask_posteriors(self, oracles):
        """Test q is within 0.15 of the exact mask marginals at the MAP group map."""
        for oracle in oracles.values():
            X_map = oracle.marginal_map_X()
            exact = oracle.mask_marginals(X_map)
            q = np.stack([vb_update_q(y, X_map, ORACLE_PARAMS, 2) for y in oracle.subjects])
            assert np.max(np.abs(q - exact)) <= 0.15

    def test_icm_fixed_point_at_map(self, oracles):
        """Test starting from the joint MAP changes nothing."""
        for oracle in oracles.values():
            X_map, masks_map, _ = oracle.joint_map()
            state = run_icm(
                oracle.subjects, X_map, InferenceOptions.for_icm(**self._fixed_options()), masks0=masks_map
            )
            assert state.iteration == 1
            assert state.converged
            assert state.X == X_map
            assert state.masks == masks_map


class TestSaveResult:
    """Tests for results directories."""

    def test_vb_layout(self, tmp_path, rng):
        """Test the variational result files."""
        subjects, X, _, params = random_problem(rng, 2, 3, LatticeDims(4, 4))
        options = InferenceOptions.for_vb(estimate_theta=False, initial_params=params, snapshot_every=1, max_iterations=3)
        state = run_vb(subjects, X, options)
        save_result(state, tmp_path)

        assert read_map(tmp_path / "X_est.map") == state.X
        assert read_probmap(tmp_path / "q_1.probmap") == pytest.approx(state.q.values[1], abs=5e-7)
        lines = (tmp_path / "elbo.csv").read_text().splitlines()
        assert lines[0] == "iteration,F"
        assert len(lines) == state.iteration + 1
        assert json.loads((tmp_path / "theta.json").read_text())["algorithm"] == "vb"
        assert (tmp_path / "trace" / "X_iter1.map").exists()

    def test_icm_layout(self, tmp_path, rng):
        """Test the coordinate-ascent result files."""
        subjects, X, _, params = random_problem(rng, 2, 3, LatticeDims(4, 4))
        state = run_icm(subjects, X, InferenceOptions.for_icm(estimate_theta=False, initial_params=params))
        save_result(state, tmp_path)

        assert (tmp_path / "H_0.map").exists()
        assert (tmp_path / "H_1.map").exists()
        assert (tmp_path / "log_posterior.csv").read_text().startswith("iteration,log_posterior\n")
        assert not (tmp_path / "trace").exists()
