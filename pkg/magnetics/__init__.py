"""
Magnetostatics of the square-wire excitation array
"""
from .square_wire import square_wire_field, square_wire_gradient
from .wire_array import (
    WireArrayConfig,
    FieldSample,
    FieldMap,
    RippleSpectrum,
    array_field,
    field_map,
    field_map_arrays,
    extract_excitation_params,
    dc_mode_config,
    ripple_spectrum,
    gradient_profile,
    zero_crossings,
)

__all__ = [
    'square_wire_field',
    'square_wire_gradient',
    'WireArrayConfig',
    'FieldSample',
    'FieldMap',
    'RippleSpectrum',
    'array_field',
    'field_map',
    'field_map_arrays',
    'extract_excitation_params',
    'dc_mode_config',
    'ripple_spectrum',
    'gradient_profile',
    'zero_crossings',
]
