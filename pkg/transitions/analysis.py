"""
Stern-Gerlach split of the resonance and recovery of the unperturbed frequency
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict

from bouncer.spectrum import BouncerSpectrum, transition_frequency
from utilities.errors import DomainError
from .resonance import ResonanceCurve, find_peaks
from .waveform import ExcitationModel, FourierCoefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SternGerlachSplit:
    """Spin-dependent excitation frequencies of one transition, Hz"""
    f_plus: float
    f_minus: float

    @property
    def driving_plus(self) -> float:
        """Driving frequency of the spin-up resonance (excitation / 2)"""
        return 0.5 * self.f_plus

    @property
    def driving_minus(self) -> float:
        return 0.5 * self.f_minus

    def swapped(self) -> "SternGerlachSplit":
        return SternGerlachSplit(self.f_minus, self.f_plus)


def stern_gerlach_prediction(spectrum: BouncerSpectrum, beta0: float, n: int, m: int) -> SternGerlachSplit:
    """
    Excitation frequencies for the effective gravities m g +- mu beta0

    f+-_nm = f_nm (1 +- mu beta0 / m g)^(2/3)

    Args:
        spectrum: Bouncer eigensystem
        beta0: Mean gradient, T/m
        n, m: Distinct state indices

    Returns:
        SternGerlachSplit (f_plus for spin up)
    """
    c = spectrum.constants
    ratio = c.mu_neutron * beta0 / c.weight
    if abs(ratio) >= 1.0:
        raise DomainError(
            f"Magnetic force mu*beta0 ({c.mu_neutron * abs(beta0):.3e} N) reverses gravity ({c.weight:.3e} N)"
        )
    g = c.g_local
    f_plus = transition_frequency(spectrum.with_gravity(g * (1.0 + ratio)), n, m)
    f_minus = transition_frequency(spectrum.with_gravity(g * (1.0 - ratio)), n, m)
    return SternGerlachSplit(f_plus=f_plus, f_minus=f_minus)


def extract_unperturbed_frequency(f_plus: float, f_minus: float) -> float:
    """
    Unperturbed excitation frequency from the two driving-frequency peaks

    f = (((2 f+)^(3/2) + (2 f-)^(3/2)) / 2)^(2/3)
    """
    if f_plus <= 0 or f_minus <= 0:
        raise DomainError(f"Peak frequencies must be positive, got ({f_plus}, {f_minus})")
    if f_plus < f_minus:
        raise DomainError(f"f_plus ({f_plus}) must not be below f_minus ({f_minus})")
    return (((2.0 * f_plus) ** 1.5 + (2.0 * f_minus) ** 1.5) / 2.0) ** (2.0 / 3.0)


@dataclass(frozen=True)
class ResonanceSummary:
    """Peak, extraction and Stern-Gerlach comparison of one resonance run"""
    f_plus: float
    f_minus: float
    f12_extracted: float
    f12_true: float
    bias: float
    relative_error: float
    sg_f_plus: float
    sg_f_minus: float
    beta0: float
    beta1: float
    beta_hat: float
    B1: float
    B0y: float
    derived_from_array: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def summarize_resonance(
    curve: ResonanceCurve,
    spectrum: BouncerSpectrum,
    excitation: ExcitationModel,
    coefficients: FourierCoefficients,
    derived_from_array: bool = False
) -> ResonanceSummary:
    """
    Peaks, extracted frequency and its bias against the true transition

    The Stern-Gerlach entries are driving frequencies (excitation / 2) so
    they compare directly with f_plus and f_minus.
    """
    f_plus, f_minus = find_peaks(curve)
    f_true = abs(transition_frequency(spectrum, curve.initial_state, curve.final_state))
    f_extracted = extract_unperturbed_frequency(f_plus, f_minus)
    split = stern_gerlach_prediction(spectrum, coefficients.beta0, curve.initial_state, curve.final_state)
    f_sg_plus, f_sg_minus = sorted((abs(split.driving_plus), abs(split.driving_minus)), reverse=True)
    summary = ResonanceSummary(
        f_plus=f_plus,
        f_minus=f_minus,
        f12_extracted=f_extracted,
        f12_true=f_true,
        bias=f_extracted - f_true,
        relative_error=abs(f_extracted - f_true) / f_true,
        sg_f_plus=f_sg_plus,
        sg_f_minus=f_sg_minus,
        beta0=coefficients.beta0,
        beta1=coefficients.beta1,
        beta_hat=excitation.beta_hat,
        B1=excitation.B1,
        B0y=excitation.B0y,
        derived_from_array=derived_from_array,
    )
    logger.debug(f"Resonance summary: {summary}")
    return summary
