"""Reference gamma samplers to compare the log-scale sampler against.

`ahrens_dieter_gs` is kept on the natural scale on purpose - for small shapes it
returns exact zeros, which is the failure the log-scale sampler avoids.
`marsaglia_tsang_log` boosts a Gam(α+1) draw by U^(1/α) on the log scale, so it
stays finite for any shape.
"""
import math
import sys
from enum import Enum
from typing import Optional

import numpy as np

from smallgamma.gof import exact_cdf_z
from smallgamma.math.specfun import reg_inc_gamma_lower
from smallgamma.rng import UniformSource
from smallgamma.sampler import SamplerStats, Shape, as_shape


SMALLEST_NORMAL = sys.float_info.min
UNDERFLOW_LOG = -math.log(SMALLEST_NORMAL)
"""-log of the smallest positive normal double, ~708.396."""


class BaselineKind(Enum):
    AHRENS_DIETER_GS = 'ahrens-dieter-gs'
    MARSAGLIA_TSANG_LOG = 'marsaglia-tsang-log'

    @property
    def natural_scale(self) -> bool:
        """Whether the sampler returns Y rather than log Y."""
        return self is BaselineKind.AHRENS_DIETER_GS


def ahrens_dieter_gs(shape: Shape, src: UniformSource, stats: Optional[SamplerStats] = None) -> float:
    """Draw Y ~ Gam(α, 1) with the Ahrens-Dieter GS algorithm (0 < α < 1).

    Values below the smallest normal double are flushed to 0, as a natural scale sampler
    without subnormal support would return them.
    """
    alpha = as_shape(shape).alpha
    stats = stats if stats is not None else SamplerStats()
    b = 1 + alpha / math.e
    while True:
        stats.proposals += 1
        p = b * src.next_unit()
        if p <= 1:
            stats.right_branch += 1
            x = p ** (1 / alpha)
            if x < SMALLEST_NORMAL:
                x = 0.0
            accept = src.next_unit() <= math.exp(-x)
        else:
            x = -math.log((b - p) / alpha)
            accept = src.next_unit() <= x ** (alpha - 1)

        if accept:
            stats.accepts += 1
            return x


def ahrens_dieter_log(shape: Shape, src: UniformSource, stats: Optional[SamplerStats] = None) -> float:
    """The log of an Ahrens-Dieter draw. Underflowed draws become -inf."""
    y = ahrens_dieter_gs(shape, src, stats)
    return math.log(y) if y > 0 else -math.inf


def _marsaglia_tsang(shape: float, src: UniformSource, stats: SamplerStats) -> float:
    """Return log Y' for Y' ~ Gam(shape, 1), shape >= 1, using the squeeze method."""
    d = shape - 1 / 3
    c = 1 / (3 * math.sqrt(d))
    while True:
        x = src.next_normal()
        v = 1 + c * x
        if v <= 0:
            continue

        stats.proposals += 1
        v = v * v * v
        u = src.next_unit()
        x2 = x * x
        if u < 1 - 0.0331 * x2 * x2 or math.log(u) < 0.5 * x2 + d * (1 - v + math.log(v)):
            stats.accepts += 1
            return math.log(d * v)


def marsaglia_tsang_log(shape: Shape, src: UniformSource, stats: Optional[SamplerStats] = None) -> float:
    """Draw log Y, Y ~ Gam(α, 1), as log Y' + log(U)/α with Y' ~ Gam(α + 1, 1)."""
    alpha = as_shape(shape).alpha
    stats = stats if stats is not None else SamplerStats()
    return _marsaglia_tsang(alpha + 1, src, stats) + math.log(src.next_unit()) / alpha


BASELINES = {
    BaselineKind.AHRENS_DIETER_GS: ahrens_dieter_gs,
    BaselineKind.MARSAGLIA_TSANG_LOG: marsaglia_tsang_log,
}


def sample_baseline(kind, shape: Shape, n: int, src: UniformSource):
    """Draw `n` values with the given baseline.

    :param BaselineKind/str kind: which baseline to use
    :returns: the draws (on the baseline's own scale) and the sampling stats
    """
    draw = BASELINES[BaselineKind(kind)]
    shape = as_shape(shape)
    stats = SamplerStats()
    return np.array([draw(shape, src, stats) for _ in range(n)], dtype=float), stats


def underflow_fraction_prediction(shape: Shape) -> float:
    """The probability that Y is below the smallest normal double.

    This is 1 - exact_cdf_z(α L) = P(α, e^-L), with L = -log(smallest normal). The lower
    incomplete gamma is evaluated directly, so tiny probabilities keep their precision.
    """
    alpha = as_shape(shape).alpha
    return reg_inc_gamma_lower(alpha, math.exp(-UNDERFLOW_LOG))


def underflow_fraction_from_cdf(shape: Shape) -> float:
    """The same probability as `underflow_fraction_prediction`, but via the exact CDF of Z."""
    alpha = as_shape(shape).alpha
    return 1 - exact_cdf_z(alpha * UNDERFLOW_LOG, alpha)
