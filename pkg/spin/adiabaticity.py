"""
Spin-flip probability scan over holding field and driving frequency
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from bouncer.constants import PhysicalConstants, DEFAULT_CONSTANTS
from utilities.errors import DomainError
from utilities.sweep_runner import run_cells
from utilities.velocity_spectrum import VelocitySpectrum
from .bloch_solver import DEFAULT_PHASE_BUDGET, default_step, integrate_bloch
from .field_models import RestFrameFieldModel

MAX_SCAN_FREQUENCY = 1000.0
MIN_PHASE_SAMPLES = 4

logger = logging.getLogger(__name__)


@dataclass
class AdiabaticityScan:
    """Phase- and velocity-averaged p_max on the (B0y, f) grid"""
    B0y_values: np.ndarray
    frequencies: np.ndarray
    pmax_avg: np.ndarray
    n_cells: int

    def rows(self) -> List[Dict[str, float]]:
        """Records in (B0y, f) grid order, export units"""
        return [
            {"B0y_mT": b0y * 1e3, "f_Hz": f, "pmax_avg": float(self.pmax_avg[i, j])}
            for i, b0y in enumerate(self.B0y_values)
            for j, f in enumerate(self.frequencies)
        ]


def phase_grid(phase_samples: int) -> np.ndarray:
    """Equispaced phases on [0, 2 pi)"""
    return 2.0 * np.pi * np.arange(phase_samples) / phase_samples


def adiabaticity_scan(
    B0y_values: Sequence[float],
    frequencies: Sequence[float],
    velocity_spec: VelocitySpectrum = VelocitySpectrum(),
    phase_samples: int = 16,
    B1: float = 0.8e-3,
    length: float = 0.16,
    period: float = 0.01,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    phase_budget: float = DEFAULT_PHASE_BUDGET,
    workers: Optional[int] = None
) -> AdiabaticityScan:
    """
    Average the maximum spin-flip probability of a passage over phase and velocity

    Args:
        B0y_values: Holding fields, T
        frequencies: Driving frequencies, Hz (within [0, 1000])
        velocity_spec: Horizontal velocity spectrum
        phase_samples: Number of equispaced drive phases (>= 4)
        B1: Array field amplitude at the mirror, T
        length: Transition-region length L, m
        period: Spatial period of the array field, m
        constants: Physical constants
        phase_budget: Larmor phase per step for the step choice, rad
        workers: Thread count

    Returns:
        AdiabaticityScan
    """
    b0y_values = np.asarray(list(B0y_values), dtype=float)
    freqs = np.asarray(list(frequencies), dtype=float)
    if b0y_values.size == 0 or freqs.size == 0:
        raise DomainError("Adiabaticity scan needs non-empty B0y and frequency grids")
    if np.any(freqs < 0) or np.any(freqs > MAX_SCAN_FREQUENCY):
        raise DomainError(f"Driving frequencies must lie in [0, {MAX_SCAN_FREQUENCY}] Hz")
    if np.any(b0y_values <= 0):
        raise DomainError("Holding fields must be positive so the spin can be aligned")
    if phase_samples < MIN_PHASE_SAMPLES:
        raise DomainError(f"phase_samples must be >= {MIN_PHASE_SAMPLES}, got {phase_samples}")
    if length <= 0:
        raise DomainError(f"Transition-region length must be positive, got {length}")

    velocities, weights = velocity_spec.nodes()
    phases = phase_grid(phase_samples)
    cells = list(itertools.product(b0y_values, freqs, velocities, phases))

    def passage(cell):
        b0y, f, v, phi = cell
        model = RestFrameFieldModel(B1=B1, B0y=b0y, period=period, frequency=f, phase=phi, velocity=v)
        step = default_step(model, constants, phase_budget)
        return integrate_bloch(model, length / v, step, constants, max_samples=2).p_max

    p_max = np.asarray(run_cells(passage, cells, workers))
    p_max = p_max.reshape(len(b0y_values), len(freqs), len(velocities), len(phases))
    # phase mean first, then the velocity quadrature, in fixed order
    averaged = p_max.mean(axis=3) @ weights
    logger.debug(f"Adiabaticity scan finished: {len(cells)} passages")
    return AdiabaticityScan(
        B0y_values=b0y_values, frequencies=freqs, pmax_avg=averaged, n_cells=len(cells)
    )
