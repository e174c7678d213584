import math
from functools import lru_cache

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from smallgamma.gof import moment_check, to_z
from smallgamma.math.golden import GoldenValues
from smallgamma.rng import DEFAULT_SEED, new_source
from smallgamma.sampler import (
    MIN_SHAPE, EnvelopeParams, SamplerStats, ShapeError, ShapeParam, accept_probability, acceptance_rate, as_shape,
    envelope_mass, envelope_params, log_accept_ratio, log_eta, log_h, log_norming_constant, mean_log_gamma, mean_z,
    sample_gamma, sample_log_gamma, sample_z, to_natural_scale, var_log_gamma, var_z,
)


GOLDEN = GoldenValues()

UNDERFLOW_LOG = 708.3964185322641

shapes = st.floats(min_value=1e-9, max_value=1 - 1e-9, allow_nan=False)


@lru_cache(maxsize=None)
def draws(alpha, n, seed=DEFAULT_SEED):
    """Sample (and remember) n values of log Y."""
    return sample_log_gamma(alpha, n, new_source(seed))


@pytest.mark.parametrize('alpha', (0.0, 1.0, -0.1, 1.5, math.nan, math.inf))
def test_invalid_shapes(alpha):
    with pytest.raises(ShapeError, match=r'\(0, 1\)'):
        ShapeParam(alpha)


def test_shape_errors_are_value_errors():
    with pytest.raises(ValueError):
        envelope_params(1.5)


def test_as_shape():
    shape = ShapeParam(0.25)
    assert as_shape(shape) is shape
    assert as_shape(0.25) == shape
    assert as_shape(1e-300).alpha == 1e-300


@pytest.mark.parametrize('alpha', (1e-301, 1e-310, 5e-324))
def test_too_small_shapes(alpha):
    with pytest.raises(ShapeError, match='too small'):
        ShapeParam(alpha)


def test_smallest_shape():
    """-z/α still fits in a double at the smallest supported shape."""
    log_y, stats = sample_log_gamma(MIN_SHAPE, 1000, new_source())
    assert np.all(np.isfinite(log_y))
    assert np.all(log_y < 0)
    assert stats.proposals == 1000


@pytest.mark.parametrize('alpha, lam, w', (
    (0.1, 9.0, 0.1 / (math.e * 0.9)),
    (0.5, 1.0, 1 / math.e),
))
def test_envelope_params(alpha, lam, w):
    params = envelope_params(alpha)
    assert params.alpha == alpha
    assert params.lam == lam
    assert params.w == pytest.approx(w, rel=1e-15)
    assert params.r == pytest.approx(1 / (1 + w), rel=1e-15)


def test_envelope_params_small_shape():
    """w and r at α = 0.1 compared with high precision arithmetic."""
    params = envelope_params(0.1)
    assert params.w == pytest.approx(GOLDEN.lookup('envelope_w', 0.1), rel=1e-15)
    assert abs(params.r - GOLDEN.lookup('envelope_r', 0.1)) <= 1e-15


@given(shapes)
def test_left_branch_scale(alpha):
    """w λ = 1/e, so the left branch of the envelope starts at e^-1."""
    params = envelope_params(alpha)
    assert params.w * params.lam == pytest.approx(1 / math.e, rel=1e-14)


@given(shapes)
def test_branch_probabilities(alpha):
    params = envelope_params(alpha)
    assert abs(params.r + params.w * params.r - 1) <= 1e-15
    assert 0 < params.r <= 1


@given(shapes, st.floats(min_value=-50, max_value=0, exclude_max=True, allow_nan=False))
def test_left_branch_log_form(alpha, z):
    """log η(z) = log w + log λ + λ z for z < 0."""
    params = envelope_params(alpha)
    expected = math.log(params.w) + math.log(params.lam) + params.lam * z
    assert log_eta(z, params) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_envelope_mass():
    """Both branches of the envelope integrate to their stated masses."""
    params = envelope_params(0.2)
    left, _ = integrate.quad(lambda z: math.exp(log_eta(z, params)), -np.inf, 0)
    right, _ = integrate.quad(lambda z: math.exp(log_eta(z, params)), 0, np.inf)
    assert left == pytest.approx(params.w, rel=1e-7)
    assert right == pytest.approx(1.0, rel=1e-7)
    assert envelope_mass(params) == pytest.approx(left + right, rel=1e-7)


@pytest.mark.parametrize('alpha', (0.1, 0.5))
def test_target_mass(alpha):
    """h integrates to Γ(α + 1), i.e. exp(-log c)."""
    left, _ = integrate.quad(lambda z: math.exp(log_h(z, alpha)), -40 * alpha, 0)
    right, _ = integrate.quad(lambda z: math.exp(log_h(z, alpha)), 0, 60)
    assert left + right == pytest.approx(math.exp(-log_norming_constant(alpha)), rel=1e-7)


def test_log_h():
    record, = GOLDEN['log_h']
    assert log_h(*record.inputs) == pytest.approx(record.value, rel=1e-13)
    assert log_h(0.0, 0.5) == -1.0


def test_log_h_far_left():
    """Far to the left the density is 0, rather than an overflow or a NaN."""
    assert log_h(-1000.0, 0.1) == -math.inf
    assert log_h(-1e300, 1e-6) == -math.inf


@pytest.mark.parametrize('z, expected', (
    (0.0, 0.0),
    (2.0, -2.0),
    (-0.5, -1 - 4.5),
))
def test_log_eta(z, expected):
    assert log_eta(z, envelope_params(0.1)) == pytest.approx(expected, rel=1e-15)


def test_log_accept_ratio_values():
    params = envelope_params(0.1)
    record, = GOLDEN['log_accept_ratio_t2']
    assert log_accept_ratio(-0.1 * math.log(2), params) == pytest.approx(record.value, rel=1e-12)
    # t = 2: 1 + 2 - e²
    assert log_accept_ratio(-0.2, params) == pytest.approx(3 - math.exp(2), rel=1e-13)
    assert log_accept_ratio(0.0, params) == -1.0
    assert log_accept_ratio(-1000.0, params) == -math.inf


@pytest.mark.parametrize('alpha', (1e-6, 1e-3, 0.1, 0.5, 0.9))
def test_envelope_dominates(alpha):
    """h <= η everywhere, and h/η is computed consistently with both of them."""
    params = envelope_params(alpha)
    grid = [-10 * alpha * k / 100 for k in range(101)] + [0.1 * k for k in range(201)]
    for z in grid + np.linspace(-5, 50, 2001).tolist() + [-1e-12, -1e-300, 1e-300]:
        ratio = log_accept_ratio(z, params)
        assert ratio <= 0
        target, envelope = log_h(z, alpha), log_eta(z, params)
        if math.isfinite(target):
            assert target - envelope <= 1e-12
            assert target - envelope == pytest.approx(ratio, rel=1e-12, abs=1e-9)


@given(shapes, st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_envelope_dominates_property(alpha, z):
    assert log_accept_ratio(z, envelope_params(alpha)) <= 0


@pytest.mark.parametrize('alpha', (1e-6, 0.01, 0.1, 0.5))
def test_envelope_touches_at_zero(alpha):
    """The left branch is tangent to h at 0-."""
    assert log_accept_ratio(-1e-9 * alpha, envelope_params(alpha)) >= -1e-9


@pytest.mark.parametrize('alpha', (1e-3, 0.01, 0.1))
def test_envelope_tight_on_the_right(alpha):
    assert log_accept_ratio(50.0, envelope_params(alpha)) >= -1e-12


def test_acceptance_rate_limits():
    assert acceptance_rate(1e-9).exact > 1 - 1e-8
    record, = GOLDEN['acceptance_rate']
    assert acceptance_rate(0.5).exact == pytest.approx(record.value, rel=1e-14)
    assert 1 / acceptance_rate(1e-6).exact <= 1.000002


@pytest.mark.parametrize('alpha', (0.001, 0.01, 0.1))
def test_acceptance_rate_approximation(alpha):
    """1 - α/e is the first order expansion of the rate, so the error is O(α²)."""
    rate = acceptance_rate(alpha)
    assert abs(rate.exact - rate.approx) <= alpha * alpha


@given(shapes)
def test_acceptance_rate_matches_envelope(alpha):
    assert acceptance_rate(alpha).exact == pytest.approx(envelope_params(alpha).r, rel=1e-15)


@pytest.mark.parametrize('alpha', (0.1, 0.5))
def test_accept_probability(alpha):
    assert accept_probability(alpha) == pytest.approx(GOLDEN.lookup('accept_probability', alpha), rel=1e-13)


@pytest.mark.parametrize('alpha', (0.1, 0.5))
def test_accept_probability_is_mass_ratio(alpha):
    """The chance of accepting a proposal is the mass of h over the mass of η."""
    params = envelope_params(alpha)
    left, _ = integrate.quad(lambda z: math.exp(log_h(z, alpha)), -40 * alpha, 0)
    right, _ = integrate.quad(lambda z: math.exp(log_h(z, alpha)), 0, 60)
    assert accept_probability(alpha) == pytest.approx((left + right) / envelope_mass(params), rel=1e-7)


@given(shapes)
def test_accept_probability_below_nominal_rate(alpha):
    probability = accept_probability(alpha)
    assert 0 < probability < acceptance_rate(alpha).exact


def test_accept_probability_limit():
    assert accept_probability(1e-9) > 1 - 1e-8


@pytest.mark.parametrize('alpha', (1e-3, 0.1, 0.5))
def test_moments_of_z(alpha):
    with mpmath.workdps(30):
        a = mpmath.mpf(alpha)
        expected = [-a * mpmath.digamma(a), a * a * mpmath.psi(1, a), mpmath.digamma(a), mpmath.psi(1, a)]
    computed = [mean_z(alpha), var_z(alpha), mean_log_gamma(alpha), var_log_gamma(alpha)]
    assert computed == pytest.approx([float(v) for v in expected], rel=1e-13)


def test_moments_of_z_limit():
    """Z tends to Exp(1), with mean and variance 1."""
    assert mean_z(1e-9) == pytest.approx(1, abs=1e-8)
    assert var_z(1e-9) == pytest.approx(1, abs=1e-8)


def test_sampler_stats():
    first, second = SamplerStats(10, 8, 7), SamplerStats(5, 4, 3)
    assert first + second == SamplerStats(15, 12, 10)
    assert first == SamplerStats(10, 8, 7)

    first.merge(second)
    assert first == SamplerStats(15, 12, 10)
    assert first.accept_rate == 12 / 15
    assert first.proposals_per_accept == 15 / 12
    assert first.right_branch_rate == 10 / 15


def test_empty_sampler_stats():
    stats = SamplerStats()
    assert math.isnan(stats.accept_rate)
    assert math.isnan(stats.proposals_per_accept)
    assert math.isnan(stats.right_branch_rate)


def test_sample_z_counts():
    params, stats = envelope_params(0.5), SamplerStats()
    src = new_source(11)
    values = [sample_z(params, src, stats) for _ in range(1000)]
    assert stats.accepts == 1000
    assert stats.proposals >= 1000
    assert stats.right_branch <= stats.proposals
    assert all(math.isfinite(z) for z in values)


def test_no_draws():
    log_y, stats = sample_log_gamma(0.1, 0, new_source())
    assert log_y.shape == (0,)
    assert stats == SamplerStats()


def test_negative_draws():
    with pytest.raises(ValueError):
        sample_log_gamma(0.1, -1, new_source())


def test_deterministic():
    """The same seed gives byte identical draws."""
    first, first_stats = sample_log_gamma(0.01, 5000, new_source(99))
    second, second_stats = sample_log_gamma(0.01, 5000, new_source(99))
    assert first.tobytes() == second.tobytes()
    assert first_stats == second_stats


@pytest.mark.parametrize('alpha', (0.1, 0.5))
def test_acceptance_rate_observed(alpha):
    _, stats = draws(alpha, 10 ** 5)
    p = accept_probability(alpha)
    assert abs(stats.accept_rate - p) <= 4 * math.sqrt(p * (1 - p) / stats.proposals)


@pytest.mark.parametrize('alpha', (0.1, 0.5))
def test_right_branch_rate(alpha):
    """Proposals come from the right branch with probability r."""
    _, stats = draws(alpha, 10 ** 5)
    r = envelope_params(alpha).r
    assert abs(stats.right_branch_rate - r) <= 4 * math.sqrt(r * (1 - r) / stats.proposals)


def test_proposals_per_accept():
    _, stats = draws(0.5, 10 ** 5)
    assert stats.proposals_per_accept == pytest.approx(1 / accept_probability(0.5), rel=0.01)


@pytest.mark.slow
@pytest.mark.parametrize('alpha', (1e-4, 0.01, 0.1, 0.5))
def test_million_draws(alpha):
    log_y, stats = draws(alpha, 10 ** 6)
    p = accept_probability(alpha)
    assert abs(stats.accept_rate - p) <= 4 * math.sqrt(p * (1 - p) / stats.proposals)
    assert stats.proposals_per_accept == pytest.approx(1 / p, rel=0.01)

    check = moment_check(to_z(log_y, alpha), alpha)
    assert abs(check.mean_discrepancy) < 4
    assert abs(check.var_discrepancy) < 4
    assert abs(check.mean_observed - mean_z(alpha)) <= 4 * math.sqrt(var_z(alpha) / len(log_y))


@pytest.mark.slow
def test_tiny_shape():
    """Even at α = 1e-6 every draw is finite and almost no proposal is rejected."""
    log_y, stats = draws(1e-6, 10 ** 6)
    assert np.all(np.isfinite(log_y))
    assert stats.proposals_per_accept <= 1.0001


def test_log_scale_underflow():
    """At α = 0.001 about half of the draws are below the smallest normal double."""
    log_y, _ = draws(0.001, 10 ** 5)
    expected = GOLDEN.lookup('underflow_fraction', 0.001)
    observed = np.mean(log_y < -UNDERFLOW_LOG)
    assert abs(observed - expected) <= 4 * math.sqrt(expected * (1 - expected) / len(log_y))
    assert np.all(np.isfinite(log_y))


def test_to_natural_scale():
    values = to_natural_scale(np.array([0.0, -1.0, -708.0, -708.5, -800.0, -1e6]))
    assert values[:3].tolist() == pytest.approx([1.0, math.exp(-1), math.exp(-708)], rel=1e-15)
    assert values[3:].tolist() == [0.0, 0.0, 0.0]


def test_sample_gamma():
    y, _ = sample_gamma(0.001, 10 ** 4, new_source(DEFAULT_SEED))
    log_y, _ = draws(0.001, 10 ** 4)
    assert np.all(y >= 0)
    assert np.array_equal(y == 0, log_y < -UNDERFLOW_LOG)

    y, _ = sample_gamma(0.5, 10 ** 4, new_source(DEFAULT_SEED))
    assert np.all(y > 0)


def test_sample_from_params():
    """A raw float shape and a `ShapeParam` give the same draws."""
    first, _ = sample_log_gamma(ShapeParam(0.3), 100, new_source(3))
    second, _ = sample_log_gamma(0.3, 100, new_source(3))
    assert first.tolist() == second.tolist()
    assert isinstance(envelope_params(ShapeParam(0.3)), EnvelopeParams)
