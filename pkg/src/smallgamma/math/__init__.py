from smallgamma.math.specfun import (
    DomainError, ConvergenceError, log_gamma, log_gamma_complex, digamma, trigamma,
    reg_inc_gamma_upper, reg_inc_gamma_lower, reg_inc_gamma_arrays, reg_inc_gamma_log_arrays,
)
from smallgamma.math.golden import GoldenValues

__all__ = [
    'DomainError', 'ConvergenceError', 'log_gamma', 'log_gamma_complex', 'digamma', 'trigamma',
    'reg_inc_gamma_upper', 'reg_inc_gamma_lower', 'reg_inc_gamma_arrays', 'reg_inc_gamma_log_arrays',
    'GoldenValues',
]
