"""
Resonance curve of the 2 -> 1 transition averaged over phase, spin and velocity
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from bouncer.spectrum import BouncerSpectrum
from spin.adiabaticity import phase_grid
from utilities.errors import DomainError, NoPeakError
from utilities.sweep_runner import run_cells
from utilities.velocity_spectrum import VelocitySpectrum
from .schrodinger_solver import DEFAULT_PHASE_BUDGET, FULL_DRIVE, integrate_amplitudes
from .waveform import ExcitationModel, fourier_coefficients

NOISE_FLOOR = 1e-3
MAX_PEAK_SPACING = 0.5
SPINS = (1, -1)

logger = logging.getLogger(__name__)


@dataclass
class ResonanceCurve:
    """Transition probability vs driving frequency"""
    frequencies: np.ndarray
    probabilities: np.ndarray
    p_spin_up: np.ndarray
    p_spin_down: np.ndarray
    per_velocity: np.ndarray
    velocities: np.ndarray
    initial_state: int
    final_state: int
    n_cells: int

    def rows(self) -> List[Dict[str, float]]:
        return [
            {
                "f_Hz": float(f),
                "P_avg": float(self.probabilities[i]),
                "P_spin_up": float(self.p_spin_up[i]),
                "P_spin_down": float(self.p_spin_down[i]),
            }
            for i, f in enumerate(self.frequencies)
        ]


def resonance_curve(
    spectrum: BouncerSpectrum,
    excitation: ExcitationModel,
    frequencies: Sequence[float],
    velocity_spec: VelocitySpectrum = VelocitySpectrum(),
    phase_samples: int = 16,
    length: float = 0.16,
    initial_state: int = 2,
    final_state: int = 1,
    drive: str = FULL_DRIVE,
    phase_budget: float = DEFAULT_PHASE_BUDGET,
    workers: Optional[int] = None
) -> ResonanceCurve:
    """
    Integrate every (f, spin, v, phase) cell and average |a_final|^2

    Phases are averaged first (uniform), then velocities with the spectrum
    weights, then the two spins with equal weight. The spin-resolved curves
    are kept.

    Args:
        spectrum: Bouncer eigensystem (basis size)
        excitation: beta_hat, B1, B0y
        frequencies: Driving frequencies, Hz
        velocity_spec: Horizontal velocity spectrum
        phase_samples: Equispaced drive phases
        length: Transition-region length L, m
        initial_state: State populated at entry
        final_state: State projected on at exit
        drive: "full" or "harmonic"
        phase_budget: Phase per integrator step, rad
        workers: Thread count

    Returns:
        ResonanceCurve
    """
    freqs = np.asarray(list(frequencies), dtype=float)
    if freqs.size == 0:
        raise DomainError("Resonance curve needs a non-empty frequency grid")
    if np.any(freqs < 0):
        raise DomainError("Driving frequencies must be non-negative")
    if phase_samples < 1:
        raise DomainError(f"phase_samples must be >= 1, got {phase_samples}")
    spectrum.check_index(initial_state)
    spectrum.check_index(final_state)

    coefficients = fourier_coefficients(excitation.waveform(1.0))
    velocities, weights = velocity_spec.nodes()
    phases = phase_grid(phase_samples)
    cells = list(itertools.product(freqs, SPINS, velocities, phases))

    def passage(cell):
        f, spin, v, phi = cell
        state = integrate_amplitudes(
            spectrum, excitation.waveform(f, phi), spin, v,
            initial_state=initial_state, length=length, phase_budget=phase_budget,
            drive=drive, coefficients=coefficients
        )
        return state.probability(final_state)

    probabilities = np.asarray(run_cells(passage, cells, workers))
    probabilities = probabilities.reshape(len(freqs), len(SPINS), len(velocities), len(phases))
    per_velocity = probabilities.mean(axis=3)
    per_spin = per_velocity @ weights
    logger.debug(f"Resonance curve: {len(cells)} cells over {len(freqs)} frequencies")
    return ResonanceCurve(
        frequencies=freqs,
        probabilities=per_spin.mean(axis=1),
        p_spin_up=per_spin[:, 0],
        p_spin_down=per_spin[:, 1],
        per_velocity=per_velocity,
        velocities=velocities,
        initial_state=initial_state,
        final_state=final_state,
        n_cells=len(cells),
    )


def find_peak(frequencies: Sequence[float], values: Sequence[float], noise_floor: float = NOISE_FLOOR) -> float:
    """
    Maximum of a sampled curve refined by a 3-point parabola

    Raises:
        NoPeakError: maximum below noise_floor
    """
    f = np.asarray(frequencies, dtype=float)
    p = np.asarray(values, dtype=float)
    if f.size == 0 or f.size != p.size:
        raise DomainError("Frequencies and values must be non-empty and aligned")
    i = int(np.argmax(p))
    if p[i] < noise_floor:
        raise NoPeakError(f"Curve maximum {p[i]:.2e} below noise floor {noise_floor:.0e}")
    peaks, _ = signal.find_peaks(p, height=noise_floor)
    if peaks.size == 0 or p[peaks].max() < p[i]:
        logger.warning(f"Peak at grid edge f={f[i]:.3f} Hz; not refined")
        return float(f[i])
    i = int(peaks[np.argmax(p[peaks])])

    spacing = f[i + 1] - f[i - 1]
    if spacing > 2 * MAX_PEAK_SPACING:
        logger.warning(f"Grid spacing {spacing / 2:.2f} Hz around the peak is coarser than {MAX_PEAK_SPACING} Hz")
    # vertex of the parabola through the three samples (non-uniform grid safe)
    coeffs = np.polyfit(f[i - 1:i + 2] - f[i], p[i - 1:i + 2], 2)
    if coeffs[0] >= 0:
        return float(f[i])
    return float(f[i] - coeffs[1] / (2.0 * coeffs[0]))


def find_peaks(curve: ResonanceCurve, noise_floor: float = NOISE_FLOOR) -> Tuple[float, float]:
    """(f_plus, f_minus): driving-frequency maxima of the spin-up and spin-down curves"""
    f_plus = find_peak(curve.frequencies, curve.p_spin_up, noise_floor)
    f_minus = find_peak(curve.frequencies, curve.p_spin_down, noise_floor)
    return f_plus, f_minus
