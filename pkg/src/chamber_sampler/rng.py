"""Seedable, splittable random streams.

Every sampling routine takes an explicit ``numpy.random.Generator``.  For
per-draw reproducibility the CLI derives draw ``i`` from ``(seed, i)`` alone,
so adding draws never changes earlier ones.
"""
from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed) -> np.random.Generator:
    """Return a generator for ``seed`` (an int, a Generator, or None)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng(np.random.SeedSequence(int(seed) & SEED_MASK))


def stream(seed: int, index: int, purpose: int = 0) -> np.random.Generator:
    """Counter-based child stream: depends only on ``(seed, purpose, index)``."""
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=(int(purpose), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def split(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Independent child generators for ``n`` concurrent jobs."""
    return list(rng.spawn(n))
