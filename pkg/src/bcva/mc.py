"""Reproducible chunked Monte Carlo estimation.

Each chunk draws from its own counter-based Philox substream keyed by
(seed, chunk_index), so the estimate is a pure function of the
configuration and never depends on how many workers ran the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError

# sampler contract: given a generator and a count, return that many i.i.d.
# scalar samples as a 1-d float array
Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class McConfig:
    n_paths: int
    seed: int
    chunk_size: int = 1 << 16
    antithetic: bool = False

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent substream for one chunk, keyed by (seed, chunk_index)."""
    key = ((int(seed) & 0xFFFFFFFFFFFFFFFF) << 64) | (chunk_index & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def estimate(sampler: Sampler, config: McConfig, threads: int = 1) -> McEstimate:
    """Mean and standard error of n_paths samples from `sampler`.

    Chunk partial sums are combined with compensated summation in fixed
    chunk order, so results are bitwise-identical for any thread count.
    """
    if config.n_paths < 2:
        raise ValueError("n_paths must be >= 2 for a standard error")

    n_chunks = -(-config.n_paths // config.chunk_size)
    sizes = [
        min(config.chunk_size, config.n_paths - i * config.chunk_size)
        for i in range(n_chunks)
    ]

    def run_chunk(index: int):
        rng = chunk_generator(config.seed, index)
        x = np.asarray(sampler(rng, sizes[index]), dtype=float)
        if x.shape != (sizes[index],):
            raise ValueError(f"sampler returned shape {x.shape}, expected ({sizes[index]},)")
        if not np.all(np.isfinite(x)):
            raise NumericalError(f"non-finite sample in chunk {index}")
        return float(x.sum()), float(x @ x)

    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run_chunk, range(n_chunks)))
    else:
        partials = [run_chunk(i) for i in range(n_chunks)]

    n = config.n_paths
    total = math.fsum(p[0] for p in partials)
    total_sq = math.fsum(p[1] for p in partials)
    mean = total / n
    # sample variance via the sum-of-squares identity; clamp fp cancellation
    variance = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    return McEstimate(mean=mean, std_error=math.sqrt(variance / n), n=n)
