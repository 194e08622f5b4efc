"""Reproducible, schedule-independent random streams.

Every sample index belongs to a fixed block of ``BLOCK`` consecutive
indices. A block draws from its own ``SeedSequence`` keyed by
``(seed, purpose, block)``, so the value at index i depends only on the
seed, the purpose tag and i, never on how blocks are spread over workers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 256

# purpose tags; distinct tags give independent sub-streams
CENTERS = 1
ATOMIC = 2
CONTINUOUS = 3
W_SAMPLES = 4
COEFFICIENTS = 5
AMPLITUDES = 6

WORKERS_ENV = "PLANCKMASS_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def stream(seed: int, purpose: int, block: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(purpose, block))
    return np.random.Generator(np.random.Philox(ss))


def blocks(n: int):
    for b in range((n + BLOCK - 1) // BLOCK):
        yield b, b * BLOCK, min(n, (b + 1) * BLOCK)


def block_map(fn, n: int, workers: int | None = None) -> np.ndarray:
    """Concatenate ``fn(block, start, stop)`` over all blocks in index order."""
    workers = default_workers() if workers is None else max(1, int(workers))
    jobs = list(blocks(n))
    if not jobs:
        return np.empty(0)
    if workers == 1 or len(jobs) == 1:
        parts = [fn(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: fn(*job), jobs))
    return np.concatenate(parts)


def uniform_centers(seed: int, n: int, workers: int | None = None) -> np.ndarray:
    """``n`` uniform points of the unit torus, shape (n, 2)."""

    def draw(b, start, stop):
        return stream(seed, CENTERS, b).random((BLOCK, 2))[: stop - start]

    return block_map(draw, n, workers).reshape(-1, 2)
