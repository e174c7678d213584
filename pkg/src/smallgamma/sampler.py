"""Acceptance-rejection sampling of Z = -α log Y, with Y ~ Gam(α, 1) and 0 < α < 1.

The target density of Z, up to its norming constant c = 1/Γ(α+1), is

    h(z) = exp(-z - exp(-z/α))

and it's bounded by the envelope

    η(z) = exp(-z)           for z >= 0
    η(z) = w λ exp(λ z)      for z < 0

with λ = 1/α - 1 and w = α / (e (1 - α)). Normalized, the envelope is the mixture
Exp(1) / (1 + w) + w / (1 + w) * (-Exp(λ)), with r = 1 / (1 + w) the probability of the right
branch. Since h has mass Γ(α + 1) and η has mass 1 + w, a proposal is accepted with probability
Γ(α + 1) r, slightly below r itself. Everything is done on the log scale, so that tiny shapes never
overflow or underflow - only log Y = -Z/α is returned, never Y itself.
"""
import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np

from smallgamma.math.specfun import DomainError, digamma, log_gamma, trigamma
from smallgamma.rng import UniformSource


MAX_EXP = math.floor(math.log(sys.float_info.max))
"""The largest t for which exp(t) is safely finite."""
SMALLEST_NORMAL = sys.float_info.min
MIN_SHAPE = 1e-300
"""Below this, -z/α is no longer guaranteed to fit in a double."""


class ShapeError(DomainError):
    """Raised when a shape parameter is outside of (0, 1), or too small to sample from."""


@dataclass(frozen=True)
class ShapeParam:
    """A validated small shape parameter."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ShapeError(
                'the shape must lie in the open interval (0, 1), got %r - use a standard gamma '
                'sampler for larger shapes' % (self.alpha,)
            )
        if self.alpha < MIN_SHAPE:
            raise ShapeError(
                'the shape %r is too small, the smallest supported one is %r' % (self.alpha, MIN_SHAPE)
            )


Shape = Union[ShapeParam, float]


def as_shape(shape: Shape) -> ShapeParam:
    """Return the given shape as a `ShapeParam`, validating raw numbers."""
    if isinstance(shape, ShapeParam):
        return shape
    return ShapeParam(float(shape))


@dataclass(frozen=True)
class EnvelopeParams:
    """The precomputed sampler constants for a single shape."""

    alpha: float
    lam: float
    """The rate of the left (z < 0) exponential branch."""
    w: float
    """The relative mass of the left branch."""
    r: float
    """The probability of proposing from the right branch, 1 / (1 + w)."""


@dataclass
class SamplerStats:
    """Counters of how many proposals were needed for the accepted draws."""

    proposals: int = 0
    accepts: int = 0
    right_branch: int = 0

    def __add__(self, other: 'SamplerStats') -> 'SamplerStats':
        return SamplerStats(
            self.proposals + other.proposals,
            self.accepts + other.accepts,
            self.right_branch + other.right_branch,
        )

    def merge(self, other: 'SamplerStats'):
        """Add the counts of `other` to this one."""
        self.proposals += other.proposals
        self.accepts += other.accepts
        self.right_branch += other.right_branch

    @property
    def accept_rate(self) -> float:
        return self.accepts / self.proposals if self.proposals else math.nan

    @property
    def proposals_per_accept(self) -> float:
        return self.proposals / self.accepts if self.accepts else math.nan

    @property
    def right_branch_rate(self) -> float:
        return self.right_branch / self.proposals if self.proposals else math.nan


class AcceptanceRate(NamedTuple):
    exact: float
    approx: float


def envelope_params(shape: Shape) -> EnvelopeParams:
    """Calculate the envelope constants for the given shape.

    λ is computed as (1 - α)/α rather than 1/α - 1, which keeps w λ = 1/e to a few ulps
    even when α is close to 1.
    """
    alpha = as_shape(shape).alpha
    lam = (1 - alpha) / alpha
    w = alpha / (math.e * (1 - alpha))
    return EnvelopeParams(alpha=alpha, lam=lam, w=w, r=1 / (1 + w))


def envelope_mass(params: EnvelopeParams) -> float:
    """The total mass of η/c. The right branch has mass 1, the left one w."""
    return 1 + params.w


def acceptance_rate(shape: Shape) -> AcceptanceRate:
    """Return the nominal acceptance rate r = 1 / (1 + w) and its first order approximation 1 - α/e.

    See `accept_probability` for the rate at which proposals actually get accepted.
    """
    alpha = as_shape(shape).alpha
    return AcceptanceRate(
        exact=1 / (1 + alpha / (math.e * (1 - alpha))),
        approx=1 - alpha / math.e,
    )


def accept_probability(shape: Shape) -> float:
    """The probability that a single proposal is accepted, Γ(α + 1) / (1 + w).

    This is the nominal rate `acceptance_rate(shape).exact` scaled by the mass of h, so it's what
    the observed accepts / proposals converge to.
    """
    params = envelope_params(shape)
    return math.exp(log_gamma(params.alpha + 1)) * params.r


def log_norming_constant(shape: Shape) -> float:
    """Return log c = -log Γ(α + 1)."""
    return -log_gamma(as_shape(shape).alpha + 1)


def mean_z(shape: Shape) -> float:
    """E(Z) = -α ψ(α) = 1 - α ψ(α + 1)."""
    alpha = as_shape(shape).alpha
    return 1 - alpha * digamma(alpha + 1)


def var_z(shape: Shape) -> float:
    """V(Z) = α² ψ'(α) = 1 + α² ψ'(α + 1)."""
    alpha = as_shape(shape).alpha
    return 1 + alpha * alpha * trigamma(alpha + 1)


def mean_log_gamma(shape: Shape) -> float:
    """E(log Y) = ψ(α)."""
    return digamma(as_shape(shape).alpha)


def var_log_gamma(shape: Shape) -> float:
    """V(log Y) = ψ'(α)."""
    return trigamma(as_shape(shape).alpha)


def log_h(z: float, shape: Shape) -> float:
    """Return log(h(z)/c) = -z - exp(-z/α).

    Far to the left the density is effectively 0, so -inf is returned instead of overflowing.
    """
    t = -z / as_shape(shape).alpha
    if t > MAX_EXP:
        return -math.inf
    return -z - math.exp(t)


def log_eta(z: float, params: EnvelopeParams) -> float:
    """Return log(η(z)/c). The envelope jumps from e^-1 to 1 at z = 0."""
    if z >= 0:
        return -z
    # log(w λ) == -1
    return -1 + params.lam * z


def log_accept_ratio(z: float, params: EnvelopeParams) -> float:
    """Return log(h(z)/η(z)), which is always <= 0.

    For z >= 0 this is -exp(-z/α). For z < 0, with t = -z/α, it's 1 + t - exp(t), written
    as t - expm1(t) to keep the tangency at z = 0- accurate.
    """
    t = -z / params.alpha
    if z >= 0:
        return -math.exp(t)
    if t > MAX_EXP:
        return -math.inf
    return t - math.expm1(t)


def sample_z(params: EnvelopeParams, src: UniformSource, stats: SamplerStats) -> float:
    """Draw a single Z from the normalized density h.

    The right branch reuses its uniform: given U <= r, U/r is again uniform, so -log(U/r) is Exp(1).
    """
    r, lam = params.r, params.lam
    next_unit = src.next_unit
    while True:
        stats.proposals += 1
        u = next_unit()
        if u <= r:
            stats.right_branch += 1
            z = -math.log(u / r)
        else:
            z = math.log(next_unit()) / lam

        if math.log(next_unit()) < log_accept_ratio(z, params):
            stats.accepts += 1
            return z


def sample_z_batch(params: EnvelopeParams, n: int, src: UniformSource, stats: SamplerStats) -> np.ndarray:
    """Draw `n` values of Z, in generation order."""
    return np.array([sample_z(params, src, stats) for _ in range(n)], dtype=float)


def sample_log_gamma(shape: Shape, n: int, src: UniformSource) -> Tuple[np.ndarray, SamplerStats]:
    """Draw `n` values of log Y, with Y ~ Gam(α, 1).

    :returns: the draws, in generation order, along with the sampling stats
    """
    if n < 0:
        raise ValueError('the number of draws must be >= 0, got %r' % n)
    params = envelope_params(shape)
    stats = SamplerStats()
    z = sample_z_batch(params, n, src, stats)
    return -z / params.alpha, stats


def to_natural_scale(log_y: np.ndarray) -> np.ndarray:
    """Return exp(log Y), flushing everything below the smallest normal double to 0.

    For α below ~0.01 a large part of the draws will end up as exact zeros.
    """
    with np.errstate(under='ignore'):
        y = np.exp(log_y)
    y[y < SMALLEST_NORMAL] = 0.0
    return y


def sample_gamma(shape: Shape, n: int, src: UniformSource) -> Tuple[np.ndarray, SamplerStats]:
    """Draw `n` values of Y ~ Gam(α, 1) on the natural scale. See `to_natural_scale` for the caveats."""
    log_y, stats = sample_log_gamma(shape, n, src)
    return to_natural_scale(log_y), stats
