"""
Synthetic data generation under the two forward models.

Random draws come from named sub-streams of the caller's seed: ``"params"`` for
theta, ``"group"`` for X, ``("mask", i)`` and ``("subject", i)`` for subject i, and
within a subject ``"shift"`` for the Model II label shifts Z(s) and ``"replace"``
for the substituted labels N(s). Turning epsilon up or down therefore never moves
the N(s) draws.
"""

import logging

import numpy as np

from apps.core.conf import setting
from apps.core.seeding import derive_seed, make_rng
from apps.forward.models import Dataset, GenerativeModel, MaskConvention, ModelParams
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims
from apps.mrf.models import MrfSpec
from apps.mrf.services import sample_ising, sample_potts

logger = logging.getLogger(__name__)


def sample_params(K: int, seed: int) -> ModelParams:
    """Draw theta from its hyperpriors: Dirichlet(1), Beta(1, 10) and two Uniform(0, 1)."""
    if K < 2:
        raise ValueError(f"Label count K must be at least 2, got {K}")
    rng = make_rng(seed, "params")
    pi = rng.dirichlet(np.ones(K))
    epsilon = rng.beta(1.0, 10.0)
    beta_x, beta_h = rng.uniform(0.0, 1.0, size=2)
    return ModelParams(pi=pi / pi.sum(), epsilon=epsilon, beta_x=beta_x, beta_h=beta_h)


def _replaced_voxels(H: BinaryMask, convention: MaskConvention) -> np.ndarray:
    flat = H.flat.astype(bool)
    return ~flat if convention == MaskConvention.TABLE else flat


def _check_inputs(X: LabelMap, H: BinaryMask, params: ModelParams) -> None:
    if X.dims != H.dims:
        raise ValueError(f"Group map is {X.dims}, mask is {H.dims}")
    if params.K != X.K:
        raise ValueError(f"pi covers {params.K} labels, group map has K={X.K}")


def _draw_replacements(params: ModelParams, n: int, seed: int) -> np.ndarray:
    return make_rng(seed, "replace").choice(params.K, size=n, p=params.pi)


def generate_subject_model1(
    X: LabelMap,
    H: BinaryMask,
    params: ModelParams,
    seed: int,
    convention: MaskConvention = MaskConvention.MAIN_TEXT,
) -> LabelMap:
    """Propagated voxels copy X(s) exactly; replaced voxels draw N(s) ~ pi."""
    _check_inputs(X, H, params)
    replacements = _draw_replacements(params, X.dims.n_voxels, seed)
    flat = np.where(_replaced_voxels(H, convention), replacements, X.flat)
    return LabelMap.from_flat(X.dims, flat, X.K)


def generate_subject_model2(
    X: LabelMap,
    H: BinaryMask,
    params: ModelParams,
    seed: int,
    convention: MaskConvention = MaskConvention.MAIN_TEXT,
) -> LabelMap:
    """
    Propagated voxels become (X(s) + Z(s)) mod K, where Z(s) = 0 with probability
    1 - epsilon and is uniform over {1, ..., K-1} otherwise; replaced voxels draw
    N(s) ~ pi.
    """
    _check_inputs(X, H, params)
    n = X.dims.n_voxels
    K = X.K
    shift_rng = make_rng(seed, "shift")
    flips = shift_rng.random(n) < params.epsilon
    offsets = shift_rng.integers(1, K, size=n)
    shifted = (X.flat + np.where(flips, offsets, 0)) % K
    replacements = _draw_replacements(params, n, seed)
    flat = np.where(_replaced_voxels(H, convention), replacements, shifted)
    return LabelMap.from_flat(X.dims, flat, K)


def generate_dataset(
    M: int,
    K: int,
    dims: LatticeDims,
    model: GenerativeModel,
    sweeps: int | None = None,
    seed: int = 0,
    epsilon: float | None = None,
    convention: MaskConvention = MaskConvention.MAIN_TEXT,
) -> Dataset:
    """
    Simulate a complete dataset from one root seed.

    theta is drawn from the hyperpriors. Model II datasets use epsilon =
    GROUPMAP_EPSILON_MODEL_II unless ``epsilon`` is given; Model I datasets carry
    no label noise and record epsilon = 0.
    """
    if M < 1:
        raise ValueError(f"A dataset needs at least one subject, got M={M}")
    model = GenerativeModel(model)
    if sweeps is None:
        sweeps = setting("GROUPMAP_GIBBS_SWEEPS", 100)

    drawn = sample_params(K, derive_seed(seed, "params"))
    if model == GenerativeModel.MODEL_II:
        noise = setting("GROUPMAP_EPSILON_MODEL_II", 0.01) if epsilon is None else epsilon
    else:
        noise = 0.0
    params = ModelParams(pi=drawn.pi, epsilon=noise, beta_x=drawn.beta_x, beta_h=drawn.beta_h)

    X = sample_potts(MrfSpec(dims=dims, K=K, beta=params.beta_x, sweeps=sweeps, seed=derive_seed(seed, "group")))
    generate = generate_subject_model2 if model == GenerativeModel.MODEL_II else generate_subject_model1
    masks, subjects = [], []
    for i in range(M):
        H = sample_ising(dims, params.beta_h, sweeps, derive_seed(seed, "mask", i))
        masks.append(H)
        subjects.append(generate(X, H, params, derive_seed(seed, "subject", i), convention))

    logger.info(
        f"Generated Model {model.value} dataset: M={M}, K={K}, {dims}, seed={seed}, "
        f"beta_x={params.beta_x:.3f}, beta_h={params.beta_h:.3f}, epsilon={params.epsilon:.4f}"
    )
    return Dataset(
        X=X,
        masks=masks,
        subjects=subjects,
        params=params,
        model=model,
        seed=seed,
        mask_convention=MaskConvention(convention),
        sweeps=sweeps,
    )
