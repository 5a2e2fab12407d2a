"""
AC-mode gravitational resonance: drive waveform, state evolution and analysis
"""
from .waveform import (
    ExcitationModel,
    GradientWaveform,
    FourierCoefficients,
    waveform_value,
    fourier_coefficients,
    reconstruct_waveform,
)
from .schrodinger_solver import (
    AmplitudeState,
    coupling_matrix,
    integrate_amplitudes,
    rabi_two_level_probability,
)
from .resonance import ResonanceCurve, resonance_curve, find_peak, find_peaks
from .analysis import (
    SternGerlachSplit,
    ResonanceSummary,
    stern_gerlach_prediction,
    extract_unperturbed_frequency,
    summarize_resonance,
)

__all__ = [
    'ExcitationModel',
    'GradientWaveform',
    'FourierCoefficients',
    'waveform_value',
    'fourier_coefficients',
    'reconstruct_waveform',
    'AmplitudeState',
    'coupling_matrix',
    'integrate_amplitudes',
    'rabi_two_level_probability',
    'ResonanceCurve',
    'resonance_curve',
    'find_peak',
    'find_peaks',
    'SternGerlachSplit',
    'ResonanceSummary',
    'stern_gerlach_prediction',
    'extract_unperturbed_frequency',
    'summarize_resonance',
]
