"""
Amplitudes of the bouncer states under the time-dependent gradient

i da_n/dt = E_n/hbar a_n + s (gamma/2) beta(t) sum_m <n|z|m> a_m

integrated with fixed-step RK4 in the Schrodinger picture.
"""
import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from numba import njit

from bouncer.spectrum import BouncerSpectrum, z_matrix, z_matrix_element, transition_frequency
from utilities.errors import DomainError, StepSizeError
from .waveform import FourierCoefficients, GradientWaveform, fourier_coefficients

DEFAULT_PHASE_BUDGET = 0.03
MAX_PHASE_PER_STEP = 0.05

FULL_DRIVE = "full"
HARMONIC_DRIVE = "harmonic"

logger = logging.getLogger(__name__)


@njit(nogil=True, cache=True)
def _gradient(kind, params, t):
    theta = 2.0 * math.pi * params[3] * t + params[4]
    if kind == 0:
        c2 = math.cos(theta) ** 2
        denom = math.sqrt(params[1] * params[1] * c2 + params[2] * params[2])
        if denom == 0.0:
            return 0.0
        return params[0] * params[1] * c2 / denom
    return params[0] + params[1] * math.cos(2.0 * theta)


@njit(nogil=True, cache=True)
def _derivative(a, omega, coupling, beta, out):
    n = a.shape[0]
    for i in range(n):
        acc = omega[i] * a[i]
        for j in range(n):
            acc += beta * coupling[i, j] * a[j]
        out[i] = -1j * acc


@njit(nogil=True, cache=True)
def _schrodinger_rk4(kind, params, omega, coupling, a0, step, n_steps):
    n = a0.shape[0]
    a = a0.copy()
    tmp = np.empty(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    max_norm_error = 0.0

    for i in range(n_steps):
        t = i * step
        beta_start = _gradient(kind, params, t)
        beta_mid = _gradient(kind, params, t + 0.5 * step)
        beta_end = _gradient(kind, params, t + step)
        _derivative(a, omega, coupling, beta_start, k1)
        for j in range(n):
            tmp[j] = a[j] + 0.5 * step * k1[j]
        _derivative(tmp, omega, coupling, beta_mid, k2)
        for j in range(n):
            tmp[j] = a[j] + 0.5 * step * k2[j]
        _derivative(tmp, omega, coupling, beta_mid, k3)
        for j in range(n):
            tmp[j] = a[j] + step * k3[j]
        _derivative(tmp, omega, coupling, beta_end, k4)
        norm = 0.0
        for j in range(n):
            a[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            norm += a[j].real * a[j].real + a[j].imag * a[j].imag
        error = abs(norm - 1.0)
        if error > max_norm_error:
            max_norm_error = error
    return a, max_norm_error


@dataclass
class AmplitudeState:
    """Amplitudes at the end of the transition region"""
    amplitudes: np.ndarray
    states: Tuple[int, ...]
    spin: int
    velocity: float
    phase: float
    time: float
    max_norm_error: float
    n_steps: int

    def probability(self, n: int) -> float:
        """|a_n|^2 for the 1-based state index n"""
        if n not in self.states:
            raise DomainError(f"State {n} is not part of the integrated basis {self.states}")
        amplitude = self.amplitudes[self.states.index(n)]
        return float(abs(amplitude) ** 2)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def _drive_args(w: GradientWaveform, drive: str, coefficients: Optional[FourierCoefficients]):
    if drive == FULL_DRIVE:
        return 0, np.array([w.beta_hat, w.B1, w.B0y, w.frequency, w.phase]), w.maximum
    if drive == HARMONIC_DRIVE:
        if coefficients is None:
            coefficients = fourier_coefficients(w)
        params = np.array([coefficients.beta0, coefficients.beta1, 0.0, w.frequency, w.phase])
        return 1, params, abs(coefficients.beta0) + abs(coefficients.beta1)
    raise DomainError(f"Unknown drive '{drive}' (expected '{FULL_DRIVE}' or '{HARMONIC_DRIVE}')")


def coupling_matrix(
    spectrum: BouncerSpectrum,
    basis: Sequence[int],
    spin: int,
    include_self_coupling: bool = True
) -> np.ndarray:
    """Gradient coupling s (gamma / 2) <n|z|m> on a 1-based state basis, rad/s per T/m"""
    index = np.array(basis) - 1
    z = z_matrix(spectrum)[np.ix_(index, index)]
    if not include_self_coupling:
        np.fill_diagonal(z, 0.0)
    # (s/2) gamma = s mu / hbar
    return spin * 0.5 * spectrum.constants.gamma * z


def integrate_amplitudes(
    spectrum: BouncerSpectrum,
    w: GradientWaveform,
    spin: int,
    velocity: float,
    initial_state: int = 2,
    length: float = 0.16,
    step: Optional[float] = None,
    phase_budget: float = DEFAULT_PHASE_BUDGET,
    include_self_coupling: bool = True,
    states: Optional[Sequence[int]] = None,
    drive: str = FULL_DRIVE,
    coefficients: Optional[FourierCoefficients] = None
) -> AmplitudeState:
    """
    Evolve a_n(0) = delta_{n, initial_state} over the passage time L / v

    The constant offset (E_1 + E_N) / 2 is removed from the Hamiltonian
    during integration and restored as a global phase at the end.

    Args:
        spectrum: Bouncer eigensystem (its n_states sets the basis size)
        w: Gradient waveform
        spin: +1 or -1
        velocity: Horizontal velocity, m/s
        initial_state: 1-based index of the populated state
        length: Transition-region length L, m
        step: Fixed step, s (None -> phase budget)
        phase_budget: Phase per step used for the default step, rad
        include_self_coupling: Keep the diagonal <n|z|n> terms
        states: Subset of 1-based state indices to keep (default all)
        drive: "full" waveform or its first-order "harmonic" truncation
        coefficients: Fourier coefficients for the harmonic drive

    Returns:
        AmplitudeState at t = L / v
    """
    if spin not in (1, -1):
        raise DomainError(f"Spin must be +1 or -1, got {spin}")
    if velocity <= 0:
        raise DomainError(f"Velocity must be positive, got {velocity}")
    if length <= 0:
        raise DomainError(f"Transition-region length must be positive, got {length}")

    basis = tuple(range(1, spectrum.n_states + 1)) if states is None else tuple(sorted(set(states)))
    if not basis:
        raise DomainError("Empty state basis")
    for n in basis:
        spectrum.check_index(n)
    spectrum.check_index(initial_state)
    if initial_state not in basis:
        raise DomainError(f"Initial state {initial_state} outside the integrated basis {basis}")

    index = np.array(basis) - 1
    omega_full = spectrum.angular_energies[index]
    omega_ref = 0.5 * (omega_full[0] + omega_full[-1])
    omega = omega_full - omega_ref
    coupling = coupling_matrix(spectrum, basis, spin, include_self_coupling)

    kind, params, beta_max = _drive_args(w, drive, coefficients)
    rate = float(np.max(np.abs(omega)) + beta_max * np.max(np.abs(np.linalg.eigvalsh(coupling))))
    duration = length / velocity
    if step is None:
        step = phase_budget / rate if rate > 0 else duration
    if step <= 0:
        raise DomainError(f"Step must be positive, got {step}")
    if step * rate >= MAX_PHASE_PER_STEP:
        raise StepSizeError(
            f"Phase per step {step * rate:.3f} rad exceeds {MAX_PHASE_PER_STEP} rad; reduce the step"
        )
    n_steps = max(1, int(math.ceil(duration / step - 1e-9)))
    step = duration / n_steps

    a0 = np.zeros(len(basis), dtype=np.complex128)
    a0[basis.index(initial_state)] = 1.0
    amplitudes, norm_error = _schrodinger_rk4(
        kind, params, omega, np.ascontiguousarray(coupling, dtype=np.complex128), a0, step, n_steps
    )
    amplitudes = amplitudes * np.exp(-1j * omega_ref * duration)
    return AmplitudeState(
        amplitudes=amplitudes, states=basis, spin=spin, velocity=velocity, phase=w.phase,
        time=duration, max_norm_error=float(norm_error), n_steps=n_steps
    )


def rabi_two_level_probability(
    spectrum: BouncerSpectrum,
    beta1: float,
    n: int,
    m: int,
    excitation_frequency: float,
    time: float
) -> float:
    """
    Two-level transfer probability under a harmonic gradient beta1 cos(omega t)

    P = Omega^2 / (Omega^2 + Delta^2) sin^2(sqrt(Omega^2 + Delta^2) t / 2)
    with Omega = (mu / hbar) <n|z|m> beta1 and Delta = 2 pi (f_exc - |f_nm|),
    in the rotating-wave limit.
    """
    if time < 0:
        raise DomainError(f"Time must be non-negative, got {time}")
    c = spectrum.constants
    rabi = c.mu_neutron / c.hbar * z_matrix_element(spectrum, n, m) * abs(beta1)
    detuning = 2.0 * math.pi * (excitation_frequency - abs(transition_frequency(spectrum, n, m)))
    generalized = math.hypot(rabi, detuning)
    if generalized == 0:
        return 0.0
    return (rabi / generalized) ** 2 * math.sin(0.5 * generalized * time) ** 2
