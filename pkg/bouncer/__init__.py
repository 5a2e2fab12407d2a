"""
Quantum-bouncer package
"""
from .constants import PhysicalConstants, DEFAULT_CONSTANTS
from .spectrum import (
    BouncerSpectrum,
    airy_zeros,
    transition_frequency,
    z_matrix_element,
    z_matrix,
    required_gradient,
    rabi_frequency,
    classical_turning_height,
    resonant_velocity,
)
from .wavefunctions import (
    wavefunction,
    overlap_matrix,
    quadrature_z_matrix,
    step_populations,
    ensemble_step_populations,
    PreparedState,
    prepare_state,
)

__all__ = [
    'PhysicalConstants',
    'DEFAULT_CONSTANTS',
    'BouncerSpectrum',
    'airy_zeros',
    'transition_frequency',
    'z_matrix_element',
    'z_matrix',
    'required_gradient',
    'rabi_frequency',
    'classical_turning_height',
    'resonant_velocity',
    'wavefunction',
    'overlap_matrix',
    'quadrature_z_matrix',
    'step_populations',
    'ensemble_step_populations',
    'PreparedState',
    'prepare_state',
]
