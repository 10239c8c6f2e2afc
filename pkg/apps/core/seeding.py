"""
Seeded random streams.

Every random draw in the project comes from a generator derived from a root seed
plus a tuple of keys naming the purpose (e.g. ``("mask", 3)``). Streams for
different keys are independent, and adding a new purpose never shifts the draws
of an existing one.
"""

import zlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def _key_to_int(key: str | int) -> int:
    if isinstance(key, int):
        if key < 0:
            raise ValueError(f"Stream keys must be non-negative, got {key}")
        return key
    return zlib.crc32(key.encode("utf-8"))


def _seed_sequence(seed: int, keys: tuple[str | int, ...]) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed & SEED_MASK, *(_key_to_int(k) for k in keys)])


def derive_seed(seed: int, *keys: str | int) -> int:
    """Derive a 64-bit child seed from ``seed`` and the stream ``keys``."""
    state = _seed_sequence(seed, keys).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def make_rng(seed: int, *keys: str | int) -> np.random.Generator:
    """Return a generator for the stream named by ``keys`` under ``seed``."""
    return np.random.default_rng(_seed_sequence(seed, keys))
