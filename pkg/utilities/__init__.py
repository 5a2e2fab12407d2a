"""
Utilities package
"""
from .errors import GranitError, ConfigError, DomainError, IndexRangeError, StepSizeError, NoPeakError
from .logger import SimulationLogger
from .sweep_runner import run_cells, default_workers
from .velocity_spectrum import VelocitySpectrum

__all__ = [
    'GranitError',
    'ConfigError',
    'DomainError',
    'IndexRangeError',
    'StepSizeError',
    'NoPeakError',
    'SimulationLogger',
    'run_cells',
    'default_workers',
    'VelocitySpectrum',
]
