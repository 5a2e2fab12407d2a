"""
Quantum-bouncer eigensystem: Airy zeros, energies, transition frequencies,
position matrix elements and the excitation strength for a pi pulse
"""
import math
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import ai_zeros

from utilities.errors import DomainError, IndexRangeError
from .constants import PhysicalConstants, DEFAULT_CONSTANTS, PEV

MAX_AIRY_ZEROS = 100

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8)
def _airy_zeros_cached(n_states: int) -> Tuple[float, ...]:
    # ai_zeros returns the zeros themselves, all negative
    return tuple(float(-a) for a in ai_zeros(n_states)[0])


def airy_zeros(n_states: int) -> np.ndarray:
    """
    Magnitudes of the first negative zeros of Ai

    Args:
        n_states: Number of zeros (1..100)

    Returns:
        Array [eps_1, ..., eps_n], strictly increasing
    """
    if n_states < 1 or n_states > MAX_AIRY_ZEROS:
        raise DomainError(f"n_states must be in [1, {MAX_AIRY_ZEROS}], got {n_states}")
    return np.array(_airy_zeros_cached(int(n_states)))


@dataclass(frozen=True)
class BouncerSpectrum:
    """Stationary states of a neutron above a horizontal mirror"""
    n_states: int = 4
    constants: PhysicalConstants = field(default_factory=lambda: DEFAULT_CONSTANTS)
    epsilon: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.epsilon:
            object.__setattr__(self, "epsilon", tuple(airy_zeros(self.n_states)))
        elif len(self.epsilon) != self.n_states:
            raise DomainError("epsilon length does not match n_states")

    @property
    def z0(self) -> float:
        """Gravitational length (hbar^2 / 2 m^2 g)^(1/3), m"""
        c = self.constants
        return (c.hbar ** 2 / (2.0 * c.neutron_mass ** 2 * c.g_local)) ** (1.0 / 3.0)

    @property
    def f0(self) -> float:
        """Base frequency m g z0 / 2 pi hbar, Hz"""
        c = self.constants
        return c.weight * self.z0 / (2.0 * math.pi * c.hbar)

    @property
    def energies(self) -> np.ndarray:
        """E_n = eps_n m g z0, J"""
        return np.asarray(self.epsilon) * self.constants.weight * self.z0

    @property
    def energies_peV(self) -> np.ndarray:
        return self.energies / PEV

    @property
    def angular_energies(self) -> np.ndarray:
        """E_n / hbar, rad/s"""
        return self.energies / self.constants.hbar

    def with_gravity(self, g_local: float) -> "BouncerSpectrum":
        """Same basis size for a different effective acceleration"""
        if g_local <= 0:
            raise DomainError(f"Effective gravity must be positive, got {g_local}")
        return replace(self, constants=replace(self.constants, g_local=g_local))

    def check_index(self, n: int):
        if not 1 <= n <= self.n_states:
            raise IndexRangeError(f"State index {n} outside 1..{self.n_states}")


def transition_frequency(spectrum: BouncerSpectrum, n: int, m: int) -> float:
    """
    Transition frequency f_nm = f0 (eps_n - eps_m), Hz; negative when n < m
    """
    spectrum.check_index(n)
    spectrum.check_index(m)
    if n == m:
        raise DomainError("Transition requires two distinct states")
    return spectrum.f0 * (spectrum.epsilon[n - 1] - spectrum.epsilon[m - 1])


def z_matrix_element(spectrum: BouncerSpectrum, n: int, m: int) -> float:
    """
    Closed-form <n|z|m>, m

    Off-diagonal magnitude 2 z0 / (eps_n - eps_m)^2, diagonal (2/3) z0 eps_n.
    See z_matrix for the signs in the wavefunction basis.
    """
    spectrum.check_index(n)
    spectrum.check_index(m)
    if n == m:
        return 2.0 / 3.0 * spectrum.z0 * spectrum.epsilon[n - 1]
    delta = spectrum.epsilon[n - 1] - spectrum.epsilon[m - 1]
    return 2.0 * spectrum.z0 / (delta * delta)


def z_matrix(spectrum: BouncerSpectrum, signed: bool = True) -> np.ndarray:
    """
    Full symmetric matrix of <n|z|m>, m

    With signed=True the elements refer to the eigenfunctions of
    bouncer.wavefunctions (Ai(z/z0 - eps_n) / Ai'(-eps_n), unit slope at the
    mirror), for which every off-diagonal element is -2 z0 / (eps_n - eps_m)^2.
    Loop products such as z_12 z_23 z_31 are basis invariant, so the signs
    matter once three or more states are coupled. signed=False gives the
    magnitudes.
    """
    size = spectrum.n_states
    matrix = np.empty((size, size))
    for n in range(1, size + 1):
        for m in range(1, size + 1):
            element = z_matrix_element(spectrum, n, m)
            matrix[n - 1, m - 1] = -element if signed and n != m else element
    return matrix


def required_gradient(spectrum: BouncerSpectrum, n: int, m: int, excitation_time: float) -> float:
    """
    Gradient amplitude satisfying the pi-pulse condition Omega t0 = pi

    Args:
        spectrum: Bouncer eigensystem
        n, m: Distinct state indices
        excitation_time: Passage time t0, s

    Returns:
        beta_needed, T/m
    """
    if excitation_time <= 0:
        raise DomainError(f"Excitation time must be positive, got {excitation_time}")
    ratio = transition_frequency(spectrum, n, m) / spectrum.f0
    c = spectrum.constants
    return (math.pi / 2.0) * (c.hbar / (c.mu_neutron * spectrum.z0)) * ratio ** 2 / excitation_time


def rabi_frequency(spectrum: BouncerSpectrum, n: int, m: int, beta: float) -> float:
    """Rabi angular frequency (mu / hbar) <n|z|m> beta, rad/s"""
    if beta < 0:
        raise DomainError(f"Gradient amplitude must be non-negative, got {beta}")
    c = spectrum.constants
    return c.mu_neutron / c.hbar * z_matrix_element(spectrum, n, m) * beta


def classical_turning_height(spectrum: BouncerSpectrum, n: int) -> float:
    """Height eps_n z0 where E_n equals the gravitational potential, m"""
    spectrum.check_index(n)
    return spectrum.epsilon[n - 1] * spectrum.z0


def resonant_velocity(spectrum: BouncerSpectrum, n: int, m: int, period: float = 0.01) -> float:
    """DC-mode horizontal velocity |f_nm| d at which a spatial period d is resonant, m/s"""
    if period <= 0:
        raise DomainError(f"Spatial period must be positive, got {period}")
    return abs(transition_frequency(spectrum, n, m)) * period
