"""
Noise Package
Ruido de fase gaussiano y fidelidad del estado cluster
"""

# Varianzas
from .variances import (
    NoiseSpec,
    Theta1Variance,
    variance_theta1,
    variance_theta2,
    combined_sigma
)

# Espectros
from .spectra import (
    Spectrum,
    BoxSpectrum,
    LorentzianSpectrum,
    VarianceValidation,
    variance_integral,
    variance_integral_terms,
    low_frequency_variance,
    validate_variance_by_sampling
)

# Fidelidad
from .fidelity import (
    FidelityMethod,
    FidelityResult,
    characteristic,
    fidelity_transfer_matrix,
    fidelity_brute_force,
    fidelity_floor
)

# Monte Carlo
from .sampling import (
    NoiseModel,
    sample_noisy_state,
    fidelity_monte_carlo
)

from .curve import CURVE_COLUMNS, fidelity_curve

__all__ = [
    'NoiseSpec',
    'Theta1Variance',
    'variance_theta1',
    'variance_theta2',
    'combined_sigma',
    'Spectrum',
    'BoxSpectrum',
    'LorentzianSpectrum',
    'VarianceValidation',
    'variance_integral',
    'variance_integral_terms',
    'low_frequency_variance',
    'validate_variance_by_sampling',
    'FidelityMethod',
    'FidelityResult',
    'characteristic',
    'fidelity_transfer_matrix',
    'fidelity_brute_force',
    'fidelity_floor',
    'NoiseModel',
    'sample_noisy_state',
    'fidelity_monte_carlo',
    'CURVE_COLUMNS',
    'fidelity_curve',
]
