"""Reproducible stream derivation for parallel replications.

Every replication gets its own generator whose seed depends only on
``(master_seed, replication_index)``, so results do not depend on the order
or the number of workers that execute the replications.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 output for state ``x`` (the state is advanced first)."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, index: int) -> int:
    if index < 0:
        raise ValueError("replication index must be non-negative")
    mixed = (master_seed & MASK64) ^ ((GOLDEN_GAMMA * (index + 1)) & MASK64)
    return splitmix64(mixed)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    replication_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.replication_index < 0:
            raise ValueError("replication_index must be non-negative")

    @property
    def seed(self) -> int:
        return child_seed(self.master_seed, self.replication_index)

    def substream(self, tag: int) -> "SeedSpec":
        """Independent stream nested under this one, e.g. one per quadrant."""
        return SeedSpec(self.seed, tag)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, a SeedSpec or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, SeedSpec):
        return rng.generator()
    return np.random.Generator(np.random.PCG64(rng))


def unit_exponential(rng: np.random.Generator, size=None):
    """Unit exponential draws by inversion, ``-log(1 - U)``."""
    return -np.log1p(-rng.random(size))
