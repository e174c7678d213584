"""Log-scale sampling from gamma distributions with a small shape parameter."""
from smallgamma.rng import DEFAULT_SEED, UniformSource, new_source
from smallgamma.sampler import (
    ShapeParam, ShapeError, EnvelopeParams, SamplerStats, envelope_params, acceptance_rate,
    accept_probability, sample_z, sample_log_gamma, sample_gamma,
)

__all__ = [
    'DEFAULT_SEED', 'UniformSource', 'new_source',
    'ShapeParam', 'ShapeError', 'EnvelopeParams', 'SamplerStats', 'envelope_params', 'acceptance_rate',
    'accept_probability', 'sample_z', 'sample_log_gamma', 'sample_gamma',
]
