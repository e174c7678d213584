"""Real and complex special functions for the small-shape gamma distribution.

Everything here is a pure function of its arguments. Small arguments are pushed
up with the recurrences Γ(x) = Γ(x+1)/x, ψ(x) = ψ(x+1) - 1/x and
ψ'(x) = ψ'(x+1) + 1/x² until they reach a zone where the asymptotic
expansions are accurate to double precision.
"""
import cmath
import math
from typing import List, Tuple

import numpy as np


class DomainError(ValueError):
    """Raised when a function is called outside of its domain."""


class ConvergenceError(ValueError):
    """Raised when a series or continued fraction fails to converge."""


HALF_LOG_2PI = 0.91893853320467274178
EULER_GAMMA = 0.57721566490153286061
ONE_MINUS_EULER_GAMMA = 0.42278433509846713939

LOG_GAMMA_ZONE = 10.0
POLYGAMMA_ZONE = 8.0

MAX_ITERATIONS = 500
EPSILON = np.finfo(float).eps
FPMIN = np.finfo(float).tiny / EPSILON

# B(2k) / (2k (2k - 1)), k = 1..8
_STIRLING = (
    1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400,
)
# B(2k) / 2k, k = 1..7
_DIGAMMA = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)
# B(2k), k = 1..7
_TRIGAMMA = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)
# ζ(k) - 1, k = 2..30
_ZETA_MINUS_ONE = (
    0.6449340668482264, 0.2020569031595943, 0.08232323371113819, 0.03692775514336993,
    0.01734306198444914, 0.008349277381922827, 0.00407735619794434, 0.0020083928260822143,
    0.0009945751278180853, 0.0004941886041194645, 0.0002460865533080483, 0.00012271334757848915,
    6.124813505870483e-05, 3.058823630702049e-05, 1.528225940865187e-05, 7.637197637899763e-06,
    3.81729326499984e-06, 1.908212716553939e-06, 9.539620338727962e-07, 4.769329867878064e-07,
    2.38450502727733e-07, 1.1921992596531106e-07, 5.960818905125948e-08, 2.980350351465228e-08,
    1.4901554828365043e-08, 7.45071178983543e-09, 3.725334024788457e-09, 1.862659723513049e-09,
    9.313274324196682e-10,
)
_LOG_GAMMA_NEAR_TWO = tuple(z / k for k, z in enumerate(_ZETA_MINUS_ONE, start=2))


def _horner(coefficients, x):
    """Evaluate c0 + c1*x + c2*x^2 + ... for the given coefficients."""
    total = 0.0
    for c in reversed(coefficients):
        total = total * x + c
    return total


def _check_positive(x: float, name: str):
    """Make sure that `x` is a finite, positive real (this also rejects NaNs)."""
    if not x > 0 or math.isinf(x):
        raise DomainError('%s requires a finite argument > 0, got %r' % (name, x))


def _shift_up(x, zone: float) -> Tuple[complex, List[complex]]:
    """Increment `x` by 1 until its real part reaches `zone`.

    :returns: the shifted value and all the values that were skipped over
    """
    skipped = []
    while x.real < zone:
        skipped.append(x)
        x += 1
    return x, skipped


def _stirling(z, log):
    """The asymptotic series for log Γ(z), valid for large |z|."""
    inv = 1 / z
    return (z - 0.5) * log(z) - z + HALF_LOG_2PI + inv * _horner(_STIRLING, inv * inv)


def _log_gamma_near_two(eps: float) -> float:
    """log Γ(2 + ε) = (1 - γ) ε + Σ (ζ(k) - 1) (-ε)^k / k, for |ε| <= 1/2.

    Both roots of log Γ are handled by this series, so their neighbourhoods keep
    their relative precision.
    """
    return ONE_MINUS_EULER_GAMMA * eps + eps * eps * _horner(_LOG_GAMMA_NEAR_TWO, -eps)


def log_gamma(x: float) -> float:
    """Return log Γ(x) for a positive real x."""
    _check_positive(x, 'log_gamma')
    if 0.5 <= x < 1.5:
        return _log_gamma_near_two(x - 1) - math.log(x)
    if 1.5 <= x < 2.5:
        return _log_gamma_near_two(x - 2)

    shifted, skipped = _shift_up(x, LOG_GAMMA_ZONE)
    return _stirling(shifted, math.log) - math.fsum(math.log(s) for s in skipped)


def log_gamma_complex(z: complex) -> complex:
    """Return log Γ(z) for Re(z) > 0, continued analytically from the real axis.

    The shifted-away factors are removed one complex log at a time, not as the log of
    their product. The result may differ from log(Γ(z)) by a multiple of 2πi.
    """
    z = complex(z)
    if not z.real > 0 or not cmath.isfinite(z):
        raise DomainError('log_gamma_complex requires Re(z) > 0, got %r' % (z,))

    shifted, skipped = _shift_up(z, LOG_GAMMA_ZONE)
    correction = sum((cmath.log(s) for s in skipped), 0j)
    return _stirling(shifted, cmath.log) - correction


def digamma(x: float) -> float:
    """Return ψ(x), the derivative of log Γ(x)."""
    _check_positive(x, 'digamma')

    shifted, skipped = _shift_up(x, POLYGAMMA_ZONE)
    inv = 1 / shifted
    inv2 = inv * inv
    asymptotic = math.log(shifted) - 0.5 * inv - inv2 * _horner(_DIGAMMA, inv2)
    return asymptotic - math.fsum(1 / s for s in skipped)


def trigamma(x: float) -> float:
    """Return ψ'(x), the second derivative of log Γ(x)."""
    _check_positive(x, 'trigamma')

    shifted, skipped = _shift_up(x, POLYGAMMA_ZONE)
    inv = 1 / shifted
    inv2 = inv * inv
    asymptotic = inv + 0.5 * inv2 + inv * inv2 * _horner(_TRIGAMMA, inv2)
    return asymptotic + math.fsum(1 / (s * s) for s in skipped)


def _prefactor(a: float, x: np.ndarray, log_x: np.ndarray) -> np.ndarray:
    """x^a e^-x / Γ(a), with the power taken on the log scale so that an underflowed x still works."""
    return np.exp(a * log_x - x - log_gamma(a))


def _lower_series(a: float, x: np.ndarray, log_x: np.ndarray) -> np.ndarray:
    """P(a, x) via its power series. Converges quickly when x < a + 1."""
    ap = a
    term = np.full_like(x, 1 / a)
    total = term.copy()
    for _ in range(MAX_ITERATIONS):
        ap += 1
        term = term * x / ap
        total += term
        if np.all(np.abs(term) < np.abs(total) * EPSILON):
            break
    else:
        raise ConvergenceError('incomplete gamma series did not converge for a=%r' % a)
    return total * _prefactor(a, x, log_x)


def _upper_fraction(a: float, x: np.ndarray, log_x: np.ndarray) -> np.ndarray:
    """Q(a, x) via its continued fraction (modified Lentz). Converges quickly when x >= a + 1."""
    b = x + 1 - a
    c = np.full_like(x, 1 / FPMIN)
    d = 1 / b
    h = d.copy()
    for i in range(1, MAX_ITERATIONS):
        an = -i * (i - a)
        b = b + 2
        d = an * d + b
        d = np.where(np.abs(d) < FPMIN, FPMIN, d)
        c = b + an / c
        c = np.where(np.abs(c) < FPMIN, FPMIN, c)
        d = 1 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1) <= 4 * EPSILON):
            break
    else:
        raise ConvergenceError('incomplete gamma continued fraction did not converge for a=%r' % a)
    return _prefactor(a, x, log_x) * h


def _reg_inc_gamma(a: float, x: np.ndarray, log_x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p, q = np.zeros_like(x), np.ones_like(x)
    infinite = np.isinf(x)
    p[infinite], q[infinite] = 1.0, 0.0

    # x == 0 only counts as 0 when log x says so
    series = np.isfinite(log_x) & (x < a + 1)
    if np.any(series):
        p[series] = _lower_series(a, x[series], log_x[series])
        q[series] = 1 - p[series]

    fraction = (x >= a + 1) & ~infinite
    if np.any(fraction):
        q[fraction] = _upper_fraction(a, x[fraction], log_x[fraction])
        p[fraction] = 1 - q[fraction]
    return p, q


def reg_inc_gamma_arrays(a: float, x) -> Tuple[np.ndarray, np.ndarray]:
    """Return the regularized incomplete gamma functions (P(a, x), Q(a, x)) for an array of x.

    Each element is computed on whichever side is numerically small - the power series gives P
    for x < a + 1, the continued fraction gives Q otherwise - and the other one is its complement.

    :param float a: the shape, > 0
    :param x: an array of values in [0, inf]
    """
    _check_positive(a, 'reg_inc_gamma')
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError('reg_inc_gamma requires x >= 0')

    with np.errstate(divide='ignore'):
        log_x = np.log(x)
    return _reg_inc_gamma(a, x, log_x)


def reg_inc_gamma_log_arrays(a: float, log_x) -> Tuple[np.ndarray, np.ndarray]:
    """Same as `reg_inc_gamma_arrays`, but for x given as log x.

    For log x below ~-745 the value of x itself is 0, but P(a, x) = x^a / Γ(a + 1) can still
    be far from 0 when a is small. Use this whenever x comes from exponentiating something.

    :param float a: the shape, > 0
    :param log_x: an array of values in [-inf, inf]
    """
    _check_positive(a, 'reg_inc_gamma')
    log_x = np.asarray(log_x, dtype=float)
    if np.any(np.isnan(log_x)):
        raise DomainError('reg_inc_gamma requires a non NaN log x')

    with np.errstate(over='ignore', under='ignore'):
        x = np.exp(log_x)
    return _reg_inc_gamma(a, x, log_x)


def reg_inc_gamma_upper(a: float, x: float) -> float:
    """Return Q(a, x) = Γ(a, x) / Γ(a)."""
    _, q = reg_inc_gamma_arrays(a, [x])
    return float(q[0])


def reg_inc_gamma_lower(a: float, x: float) -> float:
    """Return P(a, x) = 1 - Q(a, x), computed directly when it is the small side."""
    p, _ = reg_inc_gamma_arrays(a, [x])
    return float(p[0])
