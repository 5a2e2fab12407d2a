"""
Airy eigenfunctions, quadrature cross-checks and step-preparation populations
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import integrate
from scipy.special import airy

from utilities.errors import DomainError, GranitError
from .constants import MICRON
from .spectrum import BouncerSpectrum, airy_zeros

# Ai(x) < 1e-20 beyond x = 16, so the integrand tail is negligible there
_TAIL = 16.0
NORM_TOLERANCE = 1e-6

logger = logging.getLogger(__name__)


def _norm_factor(eps: float) -> float:
    """1 / Ai'(-eps) normalizes Ai(u - eps) on u >= 0 with unit slope at the mirror"""
    return 1.0 / airy(-eps)[1]


def _reduced_state(u, eps: float):
    """Normalized eigenfunction in units of z0 (u = z / z0), zero below the mirror"""
    u = np.asarray(u, dtype=float)
    values = airy(u - eps)[0] * _norm_factor(eps)
    return np.where(u >= 0.0, values, 0.0)


def wavefunction(spectrum: BouncerSpectrum, n: int, z) -> np.ndarray:
    """
    Normalized eigenfunction psi_n(z), 1/sqrt(m)

    Args:
        spectrum: Bouncer eigensystem
        n: State index
        z: Height(s) above the mirror, m

    Returns:
        psi_n evaluated at z (0 for z < 0)
    """
    spectrum.check_index(n)
    z0 = spectrum.z0
    return _reduced_state(np.asarray(z) / z0, spectrum.epsilon[n - 1]) / np.sqrt(z0)


def _integrate(func, lower: float, upper: float) -> float:
    value, _ = integrate.quad(func, lower, upper, limit=400, epsabs=1e-13, epsrel=1e-11)
    return value


def reduced_norm(eps: float) -> float:
    """Numerical integral of the squared normalized state on u >= 0"""
    return _integrate(lambda u: float(_reduced_state(u, eps)) ** 2, 0.0, eps + _TAIL)


def overlap_matrix(spectrum: BouncerSpectrum) -> np.ndarray:
    """Numerical <n|m> for all n, m (orthonormality check)"""
    eps = spectrum.epsilon
    size = spectrum.n_states
    result = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            upper = max(eps[i], eps[j]) + _TAIL
            value = _integrate(
                lambda u: float(_reduced_state(u, eps[i]) * _reduced_state(u, eps[j])), 0.0, upper
            )
            result[i, j] = result[j, i] = value
    return result


def quadrature_z_matrix(spectrum: BouncerSpectrum) -> np.ndarray:
    """Numerical <n|z|m> by direct quadrature, m"""
    eps = spectrum.epsilon
    size = spectrum.n_states
    result = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            upper = max(eps[i], eps[j]) + _TAIL
            value = _integrate(
                lambda u: u * float(_reduced_state(u, eps[i]) * _reduced_state(u, eps[j])), 0.0, upper
            )
            result[i, j] = result[j, i] = value
    return result * spectrum.z0


def _step_overlap(eps_after: float, eps_before: float, shift: float) -> float:
    """<n| k~> with |k~> the state k of a mirror raised by shift (units of z0)"""
    upper = max(eps_after, eps_before + shift) + _TAIL
    return _integrate(
        lambda u: float(_reduced_state(u, eps_after) * _reduced_state(u - shift, eps_before)),
        shift,
        upper
    )


def _check_norm(eps: float):
    norm = reduced_norm(eps)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise GranitError(f"Eigenfunction normalization off by {norm - 1.0:.2e} for eps={eps}")


def step_populations(spectrum: BouncerSpectrum, step_height: float, incoming_state: int) -> List[float]:
    """
    Populations after a neutron in one pre-step state goes down a step

    p_n = |integral psi_n(z) psi~_k(z - h) dz|^2 with psi~_k the eigenfunction
    of the raised mirror. The remainder 1 - sum(p_n) is leakage to states
    above the basis.

    Args:
        spectrum: Post-step eigensystem (sets how many p_n are returned)
        step_height: h, m
        incoming_state: Pre-step state index k (any k <= 100)

    Returns:
        [p_1, ..., p_N]
    """
    if step_height <= 0:
        raise DomainError(f"Step height must be positive, got {step_height}")
    if incoming_state < 1:
        raise DomainError(f"Incoming state index must be >= 1, got {incoming_state}")

    eps_before = float(airy_zeros(max(incoming_state, 1))[incoming_state - 1])
    _check_norm(eps_before)
    shift = step_height / spectrum.z0

    populations = []
    for eps_after in spectrum.epsilon:
        _check_norm(eps_after)
        amplitude = _step_overlap(eps_after, eps_before, shift)
        populations.append(amplitude * amplitude)
    return populations


def slit_acceptance(spectrum: BouncerSpectrum, state: int, slit_height: float) -> float:
    """Fraction of |psi_k|^2 below slit_height above its own mirror"""
    if slit_height <= 0:
        raise DomainError(f"Slit height must be positive, got {slit_height}")
    eps = float(airy_zeros(state)[state - 1])
    upper = min(slit_height / spectrum.z0, eps + _TAIL)
    return _integrate(lambda u: float(_reduced_state(u, eps)) ** 2, 0.0, upper)


def ensemble_weights(
    spectrum: BouncerSpectrum,
    n_incoming: int = 10,
    weighting: str = "flux",
    slit_height: float = 15.0 * MICRON
) -> np.ndarray:
    """
    Incoherent weights of the pre-step states 1..n_incoming

    "flux": each state contributes in proportion to the share of its density
    that fits through the entrance slit of the given height.
    "uniform": equal weights.
    """
    if n_incoming < 1:
        raise DomainError(f"Need at least one incoming state, got {n_incoming}")
    if weighting == "uniform":
        weights = np.ones(n_incoming)
    elif weighting == "flux":
        weights = np.array([slit_acceptance(spectrum, k, slit_height) for k in range(1, n_incoming + 1)])
    else:
        raise DomainError(f"Unknown ensemble weighting '{weighting}'")
    return weights / weights.sum()


def ensemble_step_populations(
    spectrum: BouncerSpectrum,
    step_height: float,
    n_incoming: int = 10,
    weighting: str = "flux",
    slit_height: float = 15.0 * MICRON,
    weights: Sequence[float] = None
) -> List[float]:
    """
    Populations after the step for an incoherent incoming mixture

    Args:
        spectrum: Post-step eigensystem
        step_height: h, m
        n_incoming: Number of pre-step states in the mixture
        weighting: "flux" or "uniform" (ignored when weights are given)
        slit_height: Entrance slit used by flux weighting, m
        weights: Explicit mixture weights (normalized internally)

    Returns:
        [p_1, ..., p_N]
    """
    if weights is None:
        mix = ensemble_weights(spectrum, n_incoming, weighting, slit_height)
    else:
        mix = np.asarray(weights, dtype=float)
        if mix.ndim != 1 or len(mix) == 0 or np.any(mix < 0) or mix.sum() <= 0:
            raise DomainError("Mixture weights must be a non-empty, non-negative list")
        mix = mix / mix.sum()

    total = np.zeros(spectrum.n_states)
    for k, weight in enumerate(mix, start=1):
        total += weight * np.asarray(step_populations(spectrum, step_height, k))
    logger.debug(f"Step populations at h={step_height:.3e} m: {total}")
    return total.tolist()


@dataclass(frozen=True)
class PreparedState:
    """Populations of the bouncer states right after the preparation step"""
    populations: Tuple[float, ...]
    step_height: float

    def __post_init__(self):
        for p in self.populations:
            if not -1e-12 <= p <= 1.0 + 1e-12:
                raise DomainError(f"Population {p} outside [0, 1]")

    @property
    def leakage(self) -> float:
        """Probability carried by states above the basis"""
        return max(0.0, 1.0 - sum(self.populations))


def prepare_state(spectrum: BouncerSpectrum, step_height: float, **ensemble) -> PreparedState:
    """Ensemble step populations wrapped with the step height"""
    populations = ensemble_step_populations(spectrum, step_height, **ensemble)
    return PreparedState(populations=tuple(populations), step_height=step_height)
