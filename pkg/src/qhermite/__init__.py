"""Numerical q-analysis for the q-deformed Hermite polynomials and oscillator."""
from .qcore import (
    ConvergenceError,
    QDomainError,
    QParameter,
    TruncationConfig,
    q_bracket,
    q_exp_E,
    q_exp_e,
    q_factorial,
    q_gamma,
    qpoch_finite,
    qpoch_infinite,
)
from .qtrig import (
    TrigConvention,
    lattice_trig,
    n_q,
    q_cos,
    q_sin,
    trig_orthogonality_residual,
    validated_convention,
)
from .hermite import (
    EvalMethod,
    HermiteRangeError,
    PolynomialCoeffs,
    christoffel_darboux_residual,
    generating_coefficient,
    hermite_coefficients,
    hermite_eval,
    to_hermite_ii,
)
from .oscillator import (
    DiscreteMeasure,
    LatticeSite,
    fourier_amplitude,
    ground_amplitude,
    ground_c0,
    hermite_argument,
    hermite_orthogonality_residual,
    hermite_ii_orthogonality,
    measure,
    momentum_eigenvalue,
    position_eigenvalue,
)
from .moments import expand_power, moment_closed, moment_measure, moment_qgamma

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop memoised lattice tables and the selected trig convention."""
    from . import oscillator, qtrig

    qtrig._lattice_series.cache_clear()
    qtrig._lattice_cached.cache_clear()
    qtrig.validated_convention.cache_clear()
    oscillator._ground_table.cache_clear()
