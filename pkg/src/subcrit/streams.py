"""Deterministic random-stream derivation for replica-parallel runs.

Every replica draws from its own child stream derived from (seed,
replica_index) only, so results are bit-identical for a fixed (seed,
replicas) no matter how replicas are scheduled or batched.
"""

from __future__ import annotations

import numpy as np


def root_rng(seed: int) -> np.random.Generator:
    """Generator for single-stream (non-replicated) sampling."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for replica `index`, independent of all other indices."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def child_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [child_rng(seed, i) for i in range(count)]
