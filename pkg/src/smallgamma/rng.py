"""Seedable sources of unit uniforms.

Each source wraps numpy's PCG64 generator seeded by a `SeedSequence` built from
`(seed, stream_id)`, so the same pair always replays the same stream and
different stream ids give independent streams without sharing state.
"""
import math

import numpy as np

from smallgamma.math.specfun import DomainError


DEFAULT_SEED = 20130701
"""The seed used by the CLI and the statistical checks when none is provided."""

BLOCK_SIZE = 4096
"""How many uniforms are pulled from the bit generator at a time."""


class UniformSource(object):
    """A reproducible stream of uniforms from the open interval (0, 1).

    A source is single-owner mutable state - give each worker its own one, distinguished
    by `stream_id`.
    """

    def __init__(self, seed: int = DEFAULT_SEED, stream_id: int = 0):
        """
        :param int seed: a 64 bit unsigned seed
        :param int stream_id: a 64 bit unsigned stream id
        """
        self.seed = seed
        self.stream_id = stream_id
        sequence = np.random.SeedSequence(seed, spawn_key=(stream_id,))
        self._generator = np.random.Generator(np.random.PCG64(sequence))
        self._buffer = []
        self._pos = 0
        self._spare_normal = None

    def _refill(self):
        """Get the next block of uniforms, dropping any zeros.

        `Generator.random` never returns 1.0, so dropping zeros is enough to keep the
        values in the open interval.
        """
        self._buffer = []
        while not self._buffer:
            self._buffer = [u for u in self._generator.random(BLOCK_SIZE).tolist() if u != 0.0]
        self._pos = 0

    def next_unit(self) -> float:
        """Return the next uniform from (0, 1)."""
        if self._pos == len(self._buffer):
            self._refill()
        u = self._buffer[self._pos]
        self._pos += 1
        return u

    def next_exponential(self, rate: float = 1.0) -> float:
        """Return an exponential variate with the given rate."""
        if not rate > 0 or math.isinf(rate):
            raise DomainError('the exponential rate must be a finite value > 0, got %r' % rate)
        return -math.log(self.next_unit()) / rate

    def next_normal(self) -> float:
        """Return a standard normal variate, using Marsaglia's polar method.

        Each accepted pair yields 2 normals - the second one is kept for the next call.
        """
        if self._spare_normal is not None:
            spare, self._spare_normal = self._spare_normal, None
            return spare

        while True:
            u1 = 2.0 * self.next_unit() - 1.0
            u2 = 2.0 * self.next_unit() - 1.0
            s = u1 * u1 + u2 * u2
            if 0.0 < s < 1.0:
                break
        factor = math.sqrt(-2.0 * math.log(s) / s)
        self._spare_normal = u2 * factor
        return u1 * factor

    def units(self, n: int) -> np.ndarray:
        """Return the next `n` uniforms of this stream as an array."""
        return np.fromiter((self.next_unit() for _ in range(n)), dtype=float, count=n)

    def __repr__(self):
        return '<UniformSource (seed=%s, stream_id=%s)>' % (self.seed, self.stream_id)


def new_source(seed: int = DEFAULT_SEED, stream_id: int = 0) -> UniformSource:
    """Create a new uniform source for the given seed and stream."""
    return UniformSource(seed, stream_id)
