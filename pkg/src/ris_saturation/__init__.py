"""Two-timescale RIS beamforming gain.

Pipeline: power angular spectrum -> spatial correlations -> Hermitian
Toeplitz covariance -> statistically optimized RIS phases -> beamforming
gain, its saturation bounds, and the average SNR.
"""

__version__ = "0.1.0"

from .correlation import (
    ArrayGeometry,
    CorrelationSequence,
    Provenance,
    correlation_approx,
    correlation_exact,
    correlation_sequence,
    wiener_class_check,
)
from .estimator import TwoTimescaleBeamformer
from .exceptions import (
    ConfigError,
    DivergentBoundError,
    DomainError,
    InvalidCorrelationError,
    NoDensityError,
    NumericalFailure,
    QuadratureError,
    RisSaturationError,
    UnsupportedFamilyError,
)
from .pas import Family, PasModel, gaussian_q, pas_density
from .phase import (
    GainMatrix,
    Method,
    PhaseProfile,
    brute_force_oracle,
    closed_form_two,
    dft_phase_profile,
    gain_of,
    grid_resolution_bound,
    instantaneous_benchmark,
    optimize_coordinate_ascent,
    optimize_phases,
    steering_vector,
)
from .snr import (
    SnrConfig,
    average_snr_analytic,
    sample_cascade,
    sample_ms_ris_channel,
    simulate_snr,
)
from .toeplitz import (
    CovarianceMatrix,
    SpectralSummary,
    bound_coth,
    bound_geometric,
    bound_sum_abs,
    bound_theta,
    build_covariance,
    family_bound,
    fourier_vector,
    lambda_max,
    spectral_summary,
)

__all__ = [
    "ArrayGeometry", "ConfigError", "CorrelationSequence", "CovarianceMatrix",
    "DivergentBoundError", "DomainError", "Family", "GainMatrix", "InvalidCorrelationError",
    "Method", "NoDensityError", "NumericalFailure", "PasModel", "PhaseProfile", "Provenance",
    "QuadratureError", "RisSaturationError", "SnrConfig", "SpectralSummary",
    "TwoTimescaleBeamformer", "UnsupportedFamilyError", "average_snr_analytic",
    "bound_coth", "bound_geometric", "bound_sum_abs", "bound_theta", "brute_force_oracle",
    "build_covariance", "closed_form_two", "correlation_approx", "correlation_exact",
    "correlation_sequence", "dft_phase_profile", "family_bound", "fourier_vector", "gain_of",
    "gaussian_q", "grid_resolution_bound", "instantaneous_benchmark", "lambda_max",
    "optimize_coordinate_ascent", "optimize_phases", "pas_density", "sample_cascade",
    "sample_ms_ris_channel", "simulate_snr", "spectral_summary", "steering_vector",
    "wiener_class_check",
]
