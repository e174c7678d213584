"""Parallel, reproducible batch sampling.

A batch of n draws is cut into chunks of `CHUNK_SIZE` draws. Chunk k is always
drawn from stream k of the seed, and the chunks are concatenated in stream order,
so the output only depends on (seed, n) - not on how many workers drew it.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, NamedTuple, Tuple

import numpy as np

from smallgamma.baselines import BaselineKind, sample_baseline
from smallgamma.rng import new_source
from smallgamma.sampler import SamplerStats, ShapeParam, as_shape, sample_log_gamma


logger = logging.getLogger(__name__)

CHUNK_SIZE = 2 ** 16

RGAMSS = 'rgamss'


class SamplerEntry(NamedTuple):
    draw: Callable
    natural_scale: bool


def _baseline(kind: BaselineKind) -> Callable:
    def draw(shape, n, src):
        return sample_baseline(kind, shape, n, src)
    return draw


SAMPLERS: Dict[str, SamplerEntry] = {
    RGAMSS: SamplerEntry(sample_log_gamma, False),
}
SAMPLERS.update({kind.value: SamplerEntry(_baseline(kind), kind.natural_scale) for kind in BaselineKind})


class Chunk(NamedTuple):
    sampler: str
    alpha: float
    n: int
    seed: int
    stream_id: int


def chunks(sampler: str, shape: ShapeParam, n: int, seed: int, chunk_size: int = CHUNK_SIZE) -> List[Chunk]:
    """Split a batch of `n` draws into chunks, one stream per chunk."""
    return [
        Chunk(sampler, shape.alpha, min(chunk_size, n - start), seed, stream_id)
        for stream_id, start in enumerate(range(0, n, chunk_size))
    ]


def sample_chunk(chunk: Chunk) -> Tuple[np.ndarray, SamplerStats]:
    """Draw a single chunk. This is what gets run on the workers."""
    src = new_source(chunk.seed, chunk.stream_id)
    return SAMPLERS[chunk.sampler].draw(chunk.alpha, chunk.n, src)


def sample_batch(shape, n: int, seed: int, workers: int = 1, sampler: str = RGAMSS,
                 chunk_size: int = CHUNK_SIZE) -> Tuple[np.ndarray, SamplerStats]:
    """Draw `n` values with the given sampler, spread over `workers` processes.

    :param shape: the shape parameter
    :param int n: how many values to draw
    :param int seed: the seed - chunk k is drawn from stream k
    :param int workers: how many processes to use. 1 means everything is done in this process
    :param str sampler: which sampler to use - see `SAMPLERS`
    :returns: the draws, in chunk order, and the merged stats of all chunks
    """
    if sampler not in SAMPLERS:
        raise ValueError('unknown sampler %r - use one of %s' % (sampler, ', '.join(SAMPLERS)))
    if n < 0:
        raise ValueError('the number of draws must be >= 0, got %r' % n)
    if workers < 1:
        raise ValueError('at least one worker is needed, got %r' % workers)

    todo = chunks(sampler, as_shape(shape), n, seed, chunk_size)
    logger.debug('drawing %d values with %s in %d chunks on %d workers', n, sampler, len(todo), workers)
    if workers == 1 or len(todo) < 2:
        results = [sample_chunk(chunk) for chunk in todo]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(sample_chunk, todo))

    stats = SamplerStats()
    for _, chunk_stats in results:
        stats.merge(chunk_stats)
    values = np.concatenate([values for values, _ in results]) if results else np.empty(0)
    return values, stats
