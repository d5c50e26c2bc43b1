"""
fracest core library - functional error bounds for the spectral fractional Laplacian

Exact algebra of sine/cosine series and separable fields on the half-cylinder
(0,1) x (0,inf), closed-form weighted norms, the error identity, majorants,
minorants and two-sided estimates, plus an independent quadrature oracle.
"""

__version__ = "1.0.0"

from .constants import (
    DomainSpec, FractionalOrder, extension_constant, friedrichs_constant, kappa, weighted_exp_integral,
)
from .errors import (
    ConsistencyError, DegenerateBasisError, DomainError, FracestError, InvalidOrderError,
    NotInYgError, ParameterError, SeriesKindError, UnsupportedOrderError,
)
from .series import (
    CosSeries, SinSeries, build_rhs, derivative, eigenfunction, eigenfunctions, fractional_norm,
    inner, l2_norm, neg_laplacian,
)
from .fields import (
    GramIntegrator, SeparableField, SeparableFlux, StreamMode, approx_extension, candidate_flux,
    divergence, exact_extension, exact_flux, exact_solution, gradient_field, stream_flux,
    weighted_norm, yg_flux,
)
from .estimators import (
    EstimateReport, energy_functional, error_identity, hypercircle_bound, majorant, minorant,
    optimize_minorant, spectral_S_N, spectral_a8, spectral_majorant, trace_error_bounds,
    two_sided_combined,
)
from .quadrature import QuadratureSpec, quad_weighted_norm

__all__ = [
    'DomainSpec', 'FractionalOrder', 'extension_constant', 'friedrichs_constant', 'kappa',
    'weighted_exp_integral',
    'FracestError', 'InvalidOrderError', 'DomainError', 'UnsupportedOrderError', 'ParameterError',
    'SeriesKindError', 'ConsistencyError', 'NotInYgError', 'DegenerateBasisError',
    'SinSeries', 'CosSeries', 'derivative', 'neg_laplacian', 'inner', 'l2_norm', 'fractional_norm',
    'build_rhs', 'eigenfunction', 'eigenfunctions',
    'GramIntegrator', 'SeparableField', 'SeparableFlux', 'StreamMode', 'weighted_norm',
    'gradient_field', 'divergence', 'exact_extension', 'exact_solution', 'approx_extension',
    'exact_flux', 'candidate_flux', 'stream_flux', 'yg_flux',
    'EstimateReport', 'energy_functional', 'error_identity', 'hypercircle_bound', 'majorant',
    'minorant', 'optimize_minorant', 'two_sided_combined', 'spectral_S_N', 'spectral_majorant',
    'spectral_a8', 'trace_error_bounds',
    'QuadratureSpec', 'quad_weighted_norm',
]
