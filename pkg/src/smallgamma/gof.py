"""Statistical checks of sampled Z = -α log Y values.

The exact CDF of Z follows from P(Z <= z) = P(Y >= e^(-z/α)) = Q(α, e^(-z/α)),
which is what all samples are tested against. Theorem-style checks compare the
samples with the Exp(1) limit, and the characteristic function
φ(t) = Γ(α - iαt) / Γ(α) with its limit 1/(1 - it).
"""
import cmath
import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Callable, Dict, NamedTuple, Optional, Sequence

import numpy as np

from smallgamma.math.specfun import log_gamma, log_gamma_complex, reg_inc_gamma_log_arrays
from smallgamma.rng import UniformSource
from smallgamma.sampler import (
    SamplerStats, Shape, accept_probability, acceptance_rate, as_shape, envelope_params, log_h, mean_z,
    sample_z_batch, var_z,
)


logger = logging.getLogger(__name__)

DEFAULT_T_GRID = tuple(-5 + 0.5 * i for i in range(21))
"""t in [-5, 5] with step 0.5."""

MIN_REPORT_SIZE = 100

P_VALUE_THRESHOLD = 0.01
MAX_DISCREPANCY = 4.0


class SampleError(ValueError):
    """Raised when a sample is too small for the requested check."""


class KsResult(NamedTuple):
    statistic: float
    p_value: float


class MomentCheck(NamedTuple):
    mean_observed: float
    mean_theory: float
    mean_se: float
    var_observed: float
    var_theory: float
    var_se: float

    @property
    def mean_discrepancy(self) -> float:
        return (self.mean_observed - self.mean_theory) / self.mean_se

    @property
    def var_discrepancy(self) -> float:
        return (self.var_observed - self.var_theory) / self.var_se


def to_z(log_y, shape: Shape) -> np.ndarray:
    """Convert log Y values to Z = -α log Y."""
    return -as_shape(shape).alpha * np.asarray(log_y, dtype=float)


def exact_cdf_z(z, shape: Shape):
    """Return P(Z <= z) = Q(α, exp(-z/α)), for a single z or an array of them.

    The argument is passed on as log x = -z/α. exp(-z/α) underflows to 0 once z > ~745α, which
    for small α is well inside the bulk of the distribution, where 1 - Q ~ e^-z / Γ(α + 1).
    """
    alpha = as_shape(shape).alpha
    with np.errstate(over='ignore'):
        log_x = -np.asarray(z, dtype=float) / alpha
    _, q = reg_inc_gamma_log_arrays(alpha, log_x)
    if q.ndim == 0:
        return float(q)
    return q


def exp1_cdf(z):
    """The CDF of the Exp(1) limit distribution."""
    return -np.expm1(-np.maximum(np.asarray(z, dtype=float), 0.0))


def kolmogorov_sf(x: float) -> float:
    """The asymptotic Kolmogorov survival function P(K > x).

    Uses the alternating series 2 Σ (-1)^(k-1) exp(-2k²x²) for larger x, and the
    complementary theta series for small x, where the alternating one converges slowly.
    Terms are summed until they drop below 1e-12.
    """
    if x <= 0:
        return 1.0
    if x < 1.0:
        # P(K <= x) = sqrt(2π)/x Σ exp(-(2k-1)² π² / (8x²))
        cdf, k = 0.0, 1
        while True:
            term = math.exp(-(2 * k - 1) ** 2 * math.pi ** 2 / (8 * x * x))
            cdf += term
            if term < 1e-12 * max(cdf, 1e-300):
                break
            k += 1
        return min(1.0, max(0.0, 1 - math.sqrt(2 * math.pi) / x * cdf))

    total, k, sign = 0.0, 1, 1.0
    while True:
        term = math.exp(-2 * k * k * x * x)
        total += sign * term
        if term < 1e-12:
            break
        k += 1
        sign = -sign
    return min(1.0, max(0.0, 2 * total))


def ks_test(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> KsResult:
    """The one sample, two sided Kolmogorov-Smirnov test.

    :param samples: the sample to be checked
    :param cdf: the reference CDF. It gets called once, with the sorted sample as an array
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if not n:
        raise SampleError('the KS test needs a non empty sample')

    f = np.asarray(cdf(x), dtype=float)
    d_plus = np.max(np.arange(1, n + 1) / n - f)
    d_minus = np.max(f - np.arange(n) / n)
    statistic = float(max(d_plus, d_minus))
    return KsResult(statistic, kolmogorov_sf(math.sqrt(n) * statistic))


def ks_2samp(x, y) -> KsResult:
    """The two sample Kolmogorov-Smirnov test, with the asymptotic p-value."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    n1, n2 = len(x), len(y)
    if not n1 or not n2:
        raise SampleError('the two sample KS test needs 2 non empty samples')

    data_all = np.concatenate([x, y])
    cdf1 = np.searchsorted(x, data_all, side='right') / n1
    cdf2 = np.searchsorted(y, data_all, side='right') / n2
    statistic = float(np.max(np.abs(cdf1 - cdf2)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return KsResult(statistic, kolmogorov_sf((en + 0.12 + 0.11 / en) * statistic))


def moment_check(samples, shape: Shape) -> MomentCheck:
    """Compare the sample mean and variance of Z with E(Z) = 1 - α ψ(α+1), V(Z) = 1 + α² ψ'(α+1).

    The standard errors come from the sample: s/√n for the mean and
    sqrt((m4 - s⁴)/n) for the variance.
    """
    z = np.asarray(samples, dtype=float)
    n = len(z)
    if n < 2:
        raise SampleError('the moment check needs at least 2 values, got %d' % n)

    mean = float(np.mean(z))
    var = float(np.var(z, ddof=1))
    m4 = float(np.mean((z - mean) ** 4))
    return MomentCheck(
        mean_observed=mean,
        mean_theory=mean_z(shape),
        mean_se=math.sqrt(var / n),
        var_observed=var,
        var_theory=var_z(shape),
        var_se=math.sqrt(max(m4 - var * var, 0.0) / n),
    )


def cf_exact(shape: Shape, t: float) -> complex:
    """The characteristic function of Z, φ(t) = Γ(α - iαt) / Γ(α)."""
    alpha = as_shape(shape).alpha
    return cmath.exp(log_gamma_complex(complex(alpha, -alpha * t)) - log_gamma(alpha))


def cf_limit(t: float) -> complex:
    """The characteristic function of Exp(1)."""
    return 1 / complex(1, -t)


def cf_limit_check(shape: Shape, t_grid: Sequence[float] = DEFAULT_T_GRID) -> float:
    """Return max |φ(t) - 1/(1 - it)| over the given grid."""
    shape = as_shape(shape)
    return max(abs(cf_exact(shape, t) - cf_limit(t)) for t in t_grid)


def normalized_log_density(z: float, shape: Shape) -> float:
    """The log density of Z, log h(z) - log Γ(α + 1)."""
    shape = as_shape(shape)
    return log_h(z, shape) - log_gamma(shape.alpha + 1)


@dataclass
class GofReport:
    """The results of all checks for a single sampled batch.

    `accept_rate_theory` is the nominal rate 1 / (1 + w). The observed rate is checked against
    `accept_probability`, which also accounts for the mass of the target.
    """

    alpha: float
    n: int
    ks_stat_exact: float
    ks_stat_exp1: float
    p_value_exact: float
    mean_observed: float
    mean_theory: float
    mean_se: float
    var_observed: float
    var_theory: float
    var_se: float
    cf_max_abs_err: float
    accept_rate_observed: float
    accept_rate_theory: float
    accept_probability: float
    proposals: int

    @property
    def mean_discrepancy(self) -> float:
        return (self.mean_observed - self.mean_theory) / self.mean_se

    @property
    def var_discrepancy(self) -> float:
        return (self.var_observed - self.var_theory) / self.var_se

    @property
    def accept_rate_se(self) -> float:
        r = self.accept_probability
        return math.sqrt(r * (1 - r) / self.proposals)

    @property
    def accept_rate_discrepancy(self) -> float:
        return (self.accept_rate_observed - self.accept_probability) / self.accept_rate_se

    def failures(self):
        """Yield the names of all failed checks."""
        if not self.p_value_exact > P_VALUE_THRESHOLD:
            yield 'p_value_exact'
        if not abs(self.mean_discrepancy) < MAX_DISCREPANCY:
            yield 'mean'
        if not abs(self.var_discrepancy) < MAX_DISCREPANCY:
            yield 'var'
        if not abs(self.accept_rate_discrepancy) < MAX_DISCREPANCY:
            yield 'accept_rate'

    def passed(self) -> bool:
        return not any(self.failures())

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def to_flat(self) -> Dict[str, str]:
        """The report as flat key -> text pairs, with reals in round trip precision."""
        return {name: repr(value) for name, value in asdict(self).items()}

    @classmethod
    def from_flat(cls, values: Dict[str, str]) -> 'GofReport':
        types = {f.name: f.type for f in fields(cls)}
        return cls(**{
            name: int(values[name]) if types[name] in (int, 'int') else float(values[name])
            for name in cls.field_names()
        })

    def to_obj(self) -> str:
        """The report as a single JSON document."""
        return json.dumps(asdict(self))


def run_report(shape: Shape, n: int, src: UniformSource,
               t_grid: Optional[Sequence[float]] = None) -> GofReport:
    """Sample `n` values of Z and run all the checks on them."""
    if n < MIN_REPORT_SIZE:
        raise SampleError('a report needs at least %d draws, got %d' % (MIN_REPORT_SIZE, n))

    shape = as_shape(shape)
    stats = SamplerStats()
    logger.debug('sampling %d values for alpha=%r from %r', n, shape.alpha, src)
    z = sample_z_batch(envelope_params(shape), n, src, stats)

    exact = ks_test(z, lambda x: exact_cdf_z(x, shape))
    moments = moment_check(z, shape)
    report = GofReport(
        alpha=shape.alpha,
        n=n,
        ks_stat_exact=exact.statistic,
        ks_stat_exp1=ks_test(z, exp1_cdf).statistic,
        p_value_exact=exact.p_value,
        mean_observed=moments.mean_observed,
        mean_theory=moments.mean_theory,
        mean_se=moments.mean_se,
        var_observed=moments.var_observed,
        var_theory=moments.var_theory,
        var_se=moments.var_se,
        cf_max_abs_err=cf_limit_check(shape, t_grid or DEFAULT_T_GRID),
        accept_rate_observed=stats.accept_rate,
        accept_rate_theory=acceptance_rate(shape).exact,
        accept_probability=accept_probability(shape),
        proposals=stats.proposals,
    )
    logger.info('alpha=%r: KS p-value %.4g, failed checks: %s',
                shape.alpha, report.p_value_exact, list(report.failures()) or 'none')
    return report
