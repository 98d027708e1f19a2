"""Seed handling and replica-parallel execution.

Every replica of a Monte Carlo run owns an independent counter-based RNG
stream keyed by (master seed, replica index), so results do not depend on
how replicas are distributed over workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def as_generator(seed) -> np.random.Generator:
    """Accept an int seed or a ready Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def replica_rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([np.uint64(seed) & _U64, np.uint64(index) & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_chunk(fn: Callable, seed: int, lo: int, hi: int) -> list:
    return [fn(replica_rng(seed, i)) for i in range(lo, hi)]


def replica_map(fn: Callable, n_replicas: int, seed: int, workers: int = 1) -> list:
    """Apply fn(rng) once per replica, in replica order.

    fn must be picklable when workers > 1.  The result list is ordered by
    replica index regardless of the worker count.
    """
    if workers is None or workers <= 1 or n_replicas < 64:
        return _run_chunk(fn, seed, 0, n_replicas)
    n_chunks = min(workers * 4, n_replicas)
    bounds = np.linspace(0, n_replicas, n_chunks + 1).astype(int)
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_chunk, fn, seed, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for fut in futures:
            out.extend(fut.result())
    return out
