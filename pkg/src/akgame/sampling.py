"""Deterministic sampling helpers built only on ``Generator.integers``.

Keeping every draw on the raw integer stream of a seeded PCG64 pins results
to the generator algorithm itself rather than to any library's shuffling or
choice internals, which is what makes scenario files reproducible across
platforms and releases.
"""

from __future__ import annotations

import numpy as np


def new_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def shuffled_indices(rng: np.random.Generator, n: int) -> np.ndarray:
    """Fisher-Yates permutation of ``range(n)`` driven by ``rng.integers``."""
    pool = np.arange(n, dtype=np.int64)
    for t in range(n - 1):
        swap = t + int(rng.integers(0, n - t))
        pool[t], pool[swap] = pool[swap], pool[t]
    return pool


def sample_without_replacement(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Sorted uniform sample of ``k`` distinct indices from ``range(n)``."""
    if k > n:
        raise ValueError(f"cannot sample {k} items from {n}")
    pool = np.arange(n, dtype=np.int64)
    for t in range(k):
        swap = t + int(rng.integers(0, n - t))
        pool[t], pool[swap] = pool[swap], pool[t]
    return np.sort(pool[:k])
