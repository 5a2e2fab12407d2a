"""
Fixed-step RK4 integration of the Bloch equation dPi/dt = gamma Pi x B(t)
"""
import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numba import njit

from bouncer.constants import PhysicalConstants, DEFAULT_CONSTANTS
from utilities.errors import DomainError, StepSizeError

# Larmor phase per step used to pick the default step
DEFAULT_PHASE_BUDGET = 0.02
# enforced upper bound on the Larmor phase per step
MAX_PHASE_PER_STEP = 0.1
# trajectories longer than this are decimated for storage
DEFAULT_MAX_SAMPLES = 4001

logger = logging.getLogger(__name__)


@njit(nogil=True, cache=True)
def _field_at(kind, params, x_table, bx_table, bz_table, t, out):
    if kind == 0:
        drive = params[0] * math.cos(2.0 * math.pi * params[3] * t + params[4])
        angle = 2.0 * math.pi * params[5] * t / params[2]
        out[0] = drive * math.sin(angle)
        out[1] = params[1]
        out[2] = -drive * math.cos(angle)
    elif kind == 1:
        angle = params[1] * t
        out[0] = params[0] * math.sin(angle)
        out[1] = 0.0
        out[2] = params[0] * math.cos(angle)
    else:
        drive = math.cos(2.0 * math.pi * params[3] * t + params[4])
        x = params[2] + params[5] * t
        out[0] = drive * np.interp(x, x_table, bx_table)
        out[1] = params[1]
        out[2] = drive * np.interp(x, x_table, bz_table)


@njit(nogil=True, cache=True)
def _torque(pol, b, gamma, out):
    out[0] = gamma * (pol[1] * b[2] - pol[2] * b[1])
    out[1] = gamma * (pol[2] * b[0] - pol[0] * b[2])
    out[2] = gamma * (pol[0] * b[1] - pol[1] * b[0])


@njit(nogil=True, cache=True)
def _flip(pol, b):
    norm = math.sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2])
    if norm == 0.0:
        return np.nan
    return 0.5 * (1.0 - (pol[0] * b[0] + pol[1] * b[1] + pol[2] * b[2]) / norm)


@njit(nogil=True, cache=True)
def _bloch_rk4(kind, params, x_table, bx_table, bz_table, pol0, gamma, step, n_steps, stride):
    n_saved = n_steps // stride + 1
    if n_steps % stride:
        n_saved += 1
    times = np.empty(n_saved)
    saved = np.empty((n_saved, 3))
    flips = np.empty(n_saved)
    max_norm_error = 0.0

    pol = pol0.copy()
    tmp = np.empty(3)
    b = np.empty(3)
    k1 = np.empty(3)
    k2 = np.empty(3)
    k3 = np.empty(3)
    k4 = np.empty(3)

    _field_at(kind, params, x_table, bx_table, bz_table, 0.0, b)
    p_max = 0.0
    times[0] = 0.0
    saved[0] = pol
    flips[0] = _flip(pol, b)
    if flips[0] > p_max:
        p_max = flips[0]
    slot = 1

    for i in range(n_steps):
        t = i * step
        _field_at(kind, params, x_table, bx_table, bz_table, t, b)
        _torque(pol, b, gamma, k1)
        _field_at(kind, params, x_table, bx_table, bz_table, t + 0.5 * step, b)
        for j in range(3):
            tmp[j] = pol[j] + 0.5 * step * k1[j]
        _torque(tmp, b, gamma, k2)
        for j in range(3):
            tmp[j] = pol[j] + 0.5 * step * k2[j]
        _torque(tmp, b, gamma, k3)
        _field_at(kind, params, x_table, bx_table, bz_table, t + step, b)
        for j in range(3):
            tmp[j] = pol[j] + step * k3[j]
        _torque(tmp, b, gamma, k4)
        for j in range(3):
            pol[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])

        p = _flip(pol, b)
        if p > p_max:
            p_max = p
        norm_error = abs(math.sqrt(pol[0] * pol[0] + pol[1] * pol[1] + pol[2] * pol[2]) - 1.0)
        if norm_error > max_norm_error:
            max_norm_error = norm_error
        if (i + 1) % stride == 0 or i + 1 == n_steps:
            times[slot] = t + step
            saved[slot] = pol
            flips[slot] = p
            slot += 1

    return times[:slot], saved[:slot], flips[:slot], p_max, max_norm_error


@dataclass
class SpinTrajectory:
    """Polarization history of one passage"""
    times: np.ndarray
    polarization: np.ndarray
    flip_probability: np.ndarray
    p_max: float
    max_norm_error: float
    step: float
    n_steps: int


def spin_flip_probability(polarization: Sequence[float], field: Sequence[float]) -> float:
    """p = (1 - Pi . B / |B|) / 2"""
    b = np.asarray(field, dtype=float)
    norm = np.linalg.norm(b)
    if norm == 0:
        raise DomainError("Spin-flip probability is undefined at a field zero")
    return float(0.5 * (1.0 - np.dot(polarization, b) / norm))


def default_step(model, constants: PhysicalConstants = DEFAULT_CONSTANTS,
                 phase_budget: float = DEFAULT_PHASE_BUDGET) -> float:
    """Step giving a Larmor phase of phase_budget at the model's maximum |B|"""
    rate = constants.gamma * model.max_field
    if rate == 0:
        raise DomainError("Field model is identically zero")
    return phase_budget / rate


def integrate_bloch(
    model,
    duration: float,
    step: Optional[float] = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    initial_polarization: Optional[Sequence[float]] = None,
    max_samples: Optional[int] = DEFAULT_MAX_SAMPLES
) -> SpinTrajectory:
    """
    Integrate the spin over one passage

    Args:
        model: Field model exposing max_field and kernel_args()
        duration: Passage time, s
        step: Fixed step, s (None -> phase-budget default)
        constants: Physical constants (gamma)
        initial_polarization: Unit vector; default aligned with B(0)
        max_samples: Stored samples, None keeps every step (p_max always uses every step)

    Returns:
        SpinTrajectory
    """
    if duration <= 0:
        raise DomainError(f"Duration must be positive, got {duration}")
    gamma = constants.gamma
    if step is None:
        step = default_step(model, constants)
    if step <= 0:
        raise DomainError(f"Step must be positive, got {step}")
    phase = gamma * model.max_field * step
    if phase >= MAX_PHASE_PER_STEP:
        raise StepSizeError(
            f"Larmor phase per step {phase:.3f} rad exceeds {MAX_PHASE_PER_STEP} rad; reduce the step"
        )

    n_steps = max(1, int(math.ceil(duration / step - 1e-9)))
    step = duration / n_steps

    if initial_polarization is None:
        b0 = np.asarray(model.field(0.0), dtype=float)
        norm = np.linalg.norm(b0)
        if norm == 0:
            raise DomainError("Zero field at t=0; spin cannot be aligned")
        pol0 = b0 / norm
    else:
        pol0 = np.asarray(initial_polarization, dtype=float)
        pol0 = pol0 / np.linalg.norm(pol0)

    if max_samples is None:
        stride = 1
    else:
        stride = max(1, int(math.ceil(n_steps / max(1, max_samples - 1))))
    kind, params, x_table, bx_table, bz_table = model.kernel_args()
    times, pol, flips, p_max, norm_error = _bloch_rk4(
        kind, params, x_table, bx_table, bz_table, pol0, gamma, step, n_steps, stride
    )
    logger.debug(f"Bloch passage: {n_steps} steps of {step:.3e} s, p_max={p_max:.3e}")
    return SpinTrajectory(
        times=times, polarization=pol, flip_probability=flips,
        p_max=float(p_max), max_norm_error=float(norm_error), step=step, n_steps=n_steps
    )
