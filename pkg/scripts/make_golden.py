"""Regenerate the golden-values file with mpmath at 50 digits.

    $ python scripts/make_golden.py > src/smallgamma/math/data/golden_values.tsv

Every value is computed by mpmath alone, never by the library it is used to check.
"""
import mpmath

mpmath.mp.dps = 50


def fmt(value):
    """Format a value in round trip double precision."""
    if isinstance(value, mpmath.mpc):
        return '%r,%r' % (float(value.real), float(value.imag))
    return repr(float(value))


def records():
    e = mpmath.e
    yield 'log_gamma', '1.0', mpmath.loggamma(1)
    yield 'log_gamma', '2.0', mpmath.loggamma(2)
    yield 'log_gamma', '0.5', mpmath.loggamma(mpmath.mpf('0.5'))
    yield 'log_gamma', '1.5', mpmath.loggamma(mpmath.mpf('1.5'))
    yield 'digamma', '1.0', mpmath.digamma(1)
    yield 'digamma', '0.5', mpmath.digamma(mpmath.mpf('0.5'))
    yield 'trigamma', '1.0', mpmath.psi(1, 1)
    yield 'trigamma', '0.5', mpmath.psi(1, mpmath.mpf('0.5'))
    yield 'reg_inc_gamma_upper', '0.5,1.0', mpmath.gammainc(mpmath.mpf('0.5'), 1, regularized=True)
    yield 'reg_inc_gamma_upper', '1.0,3.0', mpmath.gammainc(1, 3, regularized=True)
    yield 'acceptance_rate', '0.5', 1 / (1 + 1 / e)
    yield 'log_accept_ratio_t2', '0.1', 1 + mpmath.log(2) - 2
    yield 'log_h', '-0.2,0.1', mpmath.mpf('0.2') - mpmath.exp(2)
    yield 'normalized_log_density', '0.0,0.5', -1 - mpmath.loggamma(mpmath.mpf('1.5'))
    for alpha in ('0.1', '0.01'):
        yield 'reg_inc_gamma_upper', alpha + ',1.0', mpmath.gammainc(mpmath.mpf(alpha), 1, regularized=True)
    yield 'log_gamma_complex', '0.5,-0.05', mpmath.loggamma(mpmath.mpc('0.5', '-0.05'))

    a = mpmath.mpf('0.05')
    yield 'cf_exact', '0.05,1.0', mpmath.exp(mpmath.loggamma(mpmath.mpc(a, -a)) - mpmath.loggamma(a))

    a = mpmath.mpf('0.1')
    w = a / (e * (1 - a))
    yield 'envelope_w', '0.1', w
    yield 'envelope_r', '0.1', 1 / (1 + w)
    for alpha in ('0.1', '0.5'):
        a = mpmath.mpf(alpha)
        yield 'accept_probability', alpha, mpmath.gamma(a + 1) / (1 + a / (e * (1 - a)))

    a = mpmath.mpf('0.1')
    yield 'mean_z', '0.1', -a * mpmath.digamma(a)
    yield 'var_z', '0.1', a * a * mpmath.psi(1, a)

    # the smallest normal double is 2^-1022
    yield 'underflow_fraction', '0.001', mpmath.gammainc(
        mpmath.mpf('0.001'), 0, mpmath.mpf(2) ** -1022, regularized=True)


def main():
    print('# name\tinput(s)\tvalue  (regenerate with scripts/make_golden.py)')
    for name, inputs, value in records():
        print('%s\t%s\t%s' % (name, inputs, fmt(value)))


if __name__ == '__main__':
    main()
