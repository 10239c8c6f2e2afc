"""
Potts and Ising simulation by systematic-scan Gibbs sampling.

A sweep visits every voxel once in raster order and redraws its label from the
conditional given its 8 neighbours:

    P(x_s = k | x_ds) ∝ exp(-beta * #{r in ds : x_r != k})

which is proportional to exp(beta * n_k), n_k being the number of neighbours
already carrying label k.
"""

import itertools
import logging
import math

import numpy as np
from scipy.special import softmax

from apps.core.seeding import make_rng
from apps.lattice.models import BinaryMask, LabelMap, LatticeDims
from apps.lattice.services.energy import disagreement_count, disagreement_energy
from apps.lattice.services.neighbors import neighbor_table
from apps.mrf.models import MrfSpec

logger = logging.getLogger(__name__)

MAX_ENUMERATION_VOXELS = 9


def conditional_distribution(field: LabelMap | BinaryMask, s: int, K: int, beta: float) -> np.ndarray:
    """Distribution of the label at voxel ``s`` given its neighbours."""
    dims = field.dims
    dims.coords(s)  # raises IndexError when out of range
    flat = field.flat
    counts = np.zeros(K)
    for r in neighbor_table(dims)[s]:
        counts[flat[r]] += 1
    return softmax(beta * counts)


class PottsGibbsSampler:
    """
    A Potts chain on the lattice, advanced one raster sweep at a time.

    The chain owns its random generator; two samplers built with generators in the
    same state produce identical trajectories.
    """

    def __init__(
        self,
        dims: LatticeDims,
        K: int,
        beta: float,
        rng: np.random.Generator,
        initial: LabelMap | None = None,
    ):
        if K < 2:
            raise ValueError(f"Label count K must be at least 2, got {K}")
        if beta < 0:
            raise ValueError(f"Inverse temperature must be non-negative, got {beta}")
        self.dims = dims
        self.K = K
        self.beta = beta
        self._rng = rng
        self._table = neighbor_table(dims)
        # exp(beta * n) for every possible neighbour count n
        self._weights = [math.exp(beta * n) for n in range(9)]
        if initial is None:
            self._labels = rng.integers(0, K, size=dims.n_voxels).tolist()
        else:
            if initial.dims != dims:
                raise ValueError(f"Initial map is {initial.dims}, sampler lattice is {dims}")
            self._labels = initial.flat.tolist()
        self.sweeps_done = 0

    @property
    def labels(self) -> LabelMap:
        return LabelMap.from_flat(self.dims, self._labels, self.K)

    def sweep(self) -> None:
        labels = self._labels
        weights = self._weights
        K = self.K
        uniforms = self._rng.random(len(labels)).tolist()
        for s, nbrs in enumerate(self._table):
            counts: dict[int, int] = {}
            for r in nbrs:
                label = labels[r]
                counts[label] = counts.get(label, 0) + 1
            # labels absent from the neighbourhood have weight exp(0) = 1
            total = K + sum(weights[n] - 1.0 for n in counts.values())
            target = uniforms[s] * total
            acc = 0.0
            chosen = K - 1
            for k in range(K):
                acc += weights[counts.get(k, 0)]
                if target < acc:
                    chosen = k
                    break
            labels[s] = chosen
        self.sweeps_done += 1

    def run(self, sweeps: int) -> LabelMap:
        for _ in range(sweeps):
            self.sweep()
        return self.labels


def sample_potts(spec: MrfSpec) -> LabelMap:
    """Draw a K-level Potts field: ``spec.sweeps`` raster sweeps from a uniform start."""
    sampler = PottsGibbsSampler(spec.dims, spec.K, spec.beta, make_rng(spec.seed, "gibbs"))
    field = sampler.run(spec.sweeps)
    logger.debug(
        f"Sampled {spec.dims} Potts field (K={spec.K}, beta={spec.beta:.4f}, "
        f"sweeps={spec.sweeps}): {disagreement_count(field.values)} disagreeing pairs"
    )
    return field


def sample_ising(dims: LatticeDims, beta: float, sweeps: int, seed: int) -> BinaryMask:
    """Draw a binary field: the K = 2 Potts model."""
    field = sample_potts(MrfSpec(dims=dims, K=2, beta=beta, sweeps=sweeps, seed=seed))
    return BinaryMask(field.values)


def potts_log_weight(field: LabelMap | BinaryMask, beta: float) -> float:
    """Unnormalised Potts log-probability: minus the clique energy."""
    return -disagreement_energy(field, beta)


def enumerate_potts(dims: LatticeDims, K: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Exact Potts distribution on a tiny lattice.

    Returns ``(configs, probs)``: every configuration as a row of row-major labels
    (in ``itertools.product`` order) and its probability.
    """
    if dims.n_voxels > MAX_ENUMERATION_VOXELS:
        raise ValueError(
            f"Enumeration is limited to {MAX_ENUMERATION_VOXELS} voxels, got {dims.n_voxels}"
        )
    configs = np.array(list(itertools.product(range(K), repeat=dims.n_voxels)), dtype=np.int64)
    log_weights = np.array(
        [potts_log_weight(LabelMap(c.reshape(dims.shape), K), beta) for c in configs]
    )
    return configs, softmax(log_weights)
