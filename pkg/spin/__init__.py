"""
Spin transport through the excitation region
"""
from .field_models import RestFrameFieldModel, RotatingFieldModel, ArrayMapFieldModel
from .bloch_solver import SpinTrajectory, integrate_bloch, spin_flip_probability, default_step
from .adiabaticity import AdiabaticityScan, adiabaticity_scan, phase_grid

__all__ = [
    'RestFrameFieldModel',
    'RotatingFieldModel',
    'ArrayMapFieldModel',
    'SpinTrajectory',
    'integrate_bloch',
    'spin_flip_probability',
    'default_step',
    'AdiabaticityScan',
    'adiabaticity_scan',
    'phase_grid',
]
