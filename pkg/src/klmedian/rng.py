"""Seeded random streams with keyed children.

Every random draw in the package comes from a ``numpy.random.Generator``.
Child streams are derived from the parent's seed sequence and an integer key
path, so a child does not depend on how much the parent has been consumed or
on the order in which siblings are created.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng", "child"]


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed))


def child(rng: np.random.Generator, *key: int) -> np.random.Generator:
    parent = rng.bit_generator.seed_seq
    seq = np.random.SeedSequence(
        entropy=parent.entropy,
        spawn_key=tuple(parent.spawn_key) + tuple(int(k) for k in key),
        pool_size=parent.pool_size,
    )
    return np.random.default_rng(seq)
