"""
Forward-model domain types: model parameters and synthetic datasets.
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from django.db import models

from apps.lattice.models import BinaryMask, LabelMap, LatticeDims


class GenerativeModel(models.TextChoices):
    """How subject maps are derived from the group map."""

    # H = 0 copies X(s); H = 1 draws N(s) ~ pi
    MODEL_I = "I", "Model I"
    # as Model I, but propagated labels are shifted by Z(s) with probability epsilon
    MODEL_II = "II", "Model II"

    @classmethod
    def parse(cls, value: str | int) -> "GenerativeModel":
        """Accept ``"I"``, ``"II"``, ``1``, ``2`` and the ``ModelI`` spellings."""
        text = str(value).strip().upper().removeprefix("MODEL").strip(" _")
        aliases = {"1": cls.MODEL_I, "I": cls.MODEL_I, "2": cls.MODEL_II, "II": cls.MODEL_II}
        if text not in aliases:
            raise ValueError(f"Unknown generative model {value!r}; expected I or II")
        return aliases[text]


class MaskConvention(models.TextChoices):
    """Which mask state propagates the group label."""

    MAIN_TEXT = "main_text", "H = 0 propagates"
    TABLE = "table", "H = 1 propagates"


@dataclass(frozen=True, eq=False)
class ModelParams:
    """theta = (pi, epsilon, beta_X, beta_H)."""

    pi: np.ndarray
    epsilon: float
    beta_x: float
    beta_h: float

    def __post_init__(self):
        pi = np.array(self.pi, dtype=float, copy=True)
        if pi.ndim != 1 or pi.size < 2:
            raise ValueError(f"pi must be a vector over at least 2 labels, got shape {pi.shape}")
        if np.any(pi < 0) or abs(pi.sum() - 1.0) > 1e-12:
            raise ValueError(f"pi must be a probability vector, got {pi.tolist()} (sum {pi.sum()!r})")
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.beta_x < 0 or self.beta_h < 0:
            raise ValueError(f"Inverse temperatures must be non-negative, got {self.beta_x}, {self.beta_h}")
        pi.flags.writeable = False
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "beta_x", float(self.beta_x))
        object.__setattr__(self, "beta_h", float(self.beta_h))

    @property
    def K(self) -> int:
        return self.pi.size

    @classmethod
    def initial(cls, K: int, epsilon: float = 0.05, beta: float = 0.5) -> "ModelParams":
        """Starting point for estimation: uniform pi, small epsilon, moderate coupling."""
        return cls(pi=np.full(K, 1.0 / K), epsilon=epsilon, beta_x=beta, beta_h=beta)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pi": self.pi.tolist(),
            "epsilon": self.epsilon,
            "beta_x": self.beta_x,
            "beta_h": self.beta_h,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        pi = np.asarray(data["pi"], dtype=float)
        if abs(pi.sum() - 1.0) > 1e-12:
            # hand-written or rounded values
            pi = pi / pi.sum()
        return cls(pi=pi, epsilon=data["epsilon"], beta_x=data["beta_x"], beta_h=data["beta_h"])

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


@dataclass(frozen=True)
class Dataset:
    """A group map with its masks, subject maps and generating parameters."""

    X: LabelMap
    masks: list[BinaryMask]
    subjects: list[LabelMap]
    params: ModelParams
    model: GenerativeModel
    seed: int
    mask_convention: MaskConvention = MaskConvention.MAIN_TEXT
    sweeps: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.subjects:
            raise ValueError("A dataset needs at least one subject")
        if len(self.masks) != len(self.subjects):
            raise ValueError(f"{len(self.masks)} masks for {len(self.subjects)} subjects")
        for i, (mask, subject) in enumerate(zip(self.masks, self.subjects)):
            if mask.dims != self.X.dims or subject.dims != self.X.dims:
                raise ValueError(f"Subject {i} maps do not share the group lattice {self.X.dims}")
            if subject.K != self.X.K:
                raise ValueError(f"Subject {i} has K={subject.K}, group map has K={self.X.K}")
        if self.params.K != self.X.K:
            raise ValueError(f"pi covers {self.params.K} labels, maps have K={self.X.K}")

    @property
    def M(self) -> int:
        return len(self.subjects)

    @property
    def K(self) -> int:
        return self.X.K

    @property
    def dims(self) -> LatticeDims:
        return self.X.dims
