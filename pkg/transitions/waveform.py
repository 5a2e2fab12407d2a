"""
Time-dependent |B| gradient of the AC-driven array and its Fourier expansion
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utilities.errors import DomainError

DEFAULT_FOURIER_POINTS = 4096


@dataclass(frozen=True)
class ExcitationModel:
    """Array drive parameters shared by every frequency and phase of a study"""
    beta_hat: float = 0.52
    B1: float = 0.8e-3
    B0y: float = 0.3e-3

    def __post_init__(self):
        if self.beta_hat < 0:
            raise DomainError(f"beta_hat must be non-negative, got {self.beta_hat}")
        if self.B1 < 0 or self.B0y < 0:
            raise DomainError("Field amplitudes must be non-negative")

    def waveform(self, frequency: float, phase: float = 0.0) -> "GradientWaveform":
        return GradientWaveform(self.beta_hat, self.B1, self.B0y, frequency, phase)


@dataclass(frozen=True)
class GradientWaveform:
    """
    beta(t) = beta_hat B1 cos^2(2 pi f t + phi) / sqrt(B1^2 cos^2(2 pi f t + phi) + B0y^2)
    """
    beta_hat: float = 0.52
    B1: float = 0.8e-3
    B0y: float = 0.3e-3
    frequency: float = 100.0
    phase: float = 0.0

    def __post_init__(self):
        if self.beta_hat < 0:
            raise DomainError(f"beta_hat must be non-negative, got {self.beta_hat}")
        if self.B1 < 0 or self.B0y < 0:
            raise DomainError("Field amplitudes must be non-negative")
        if self.frequency < 0:
            raise DomainError(f"Driving frequency must be non-negative, got {self.frequency}")

    @property
    def period(self) -> float:
        """Fundamental period 1 / (2 f) of the gradient, s"""
        if self.frequency == 0:
            return float("inf")
        return 0.5 / self.frequency

    @property
    def maximum(self) -> float:
        """Peak gradient beta_hat B1 / sqrt(B1^2 + B0y^2), T/m"""
        norm = np.hypot(self.B1, self.B0y)
        return 0.0 if norm == 0 else float(self.beta_hat * self.B1 / norm)

    def profile(self, theta) -> np.ndarray:
        """Gradient as a function of the drive angle theta = 2 pi f t + phi"""
        c2 = np.cos(np.asarray(theta, dtype=float)) ** 2
        denom = np.sqrt(self.B1 ** 2 * c2 + self.B0y ** 2)
        safe = np.where(denom == 0.0, 1.0, denom)
        return np.where(denom == 0.0, 0.0, self.beta_hat * self.B1 * c2 / safe)


def waveform_value(w: GradientWaveform, t) -> np.ndarray:
    """beta(t), T/m"""
    return w.profile(2.0 * np.pi * w.frequency * np.asarray(t, dtype=float) + w.phase)


@dataclass(frozen=True)
class FourierCoefficients:
    """Cosine series beta0 + sum_k beta_k cos(2k (2 pi f t + phi))"""
    beta0: float
    harmonics: Tuple[float, ...]

    @property
    def beta1(self) -> float:
        return self.harmonics[0]


def fourier_coefficients(
    w: GradientWaveform,
    n_harmonics: int = 1,
    n_points: int = DEFAULT_FOURIER_POINTS
) -> FourierCoefficients:
    """
    Cosine coefficients of beta over one period by the trapezoid rule

    The gradient has period pi in the drive angle and is even about it, so
    only cosines of 2k theta appear. The equispaced trapezoid rule on a
    periodic integrand reduces to the sample mean.

    Args:
        w: Waveform (frequency and phase do not change the coefficients)
        n_harmonics: Number of cosine harmonics after the mean (>= 1)
        n_points: Quadrature points over one period

    Returns:
        FourierCoefficients
    """
    if n_harmonics < 1:
        raise DomainError(f"n_harmonics must be >= 1, got {n_harmonics}")
    if n_points < 2 * n_harmonics + 2:
        raise DomainError(f"n_points={n_points} too small for {n_harmonics} harmonics")
    theta = np.pi * np.arange(n_points) / n_points
    values = w.profile(theta)
    beta0 = float(values.mean())
    harmonics = tuple(
        float(2.0 * np.mean(values * np.cos(2 * k * theta))) for k in range(1, n_harmonics + 1)
    )
    return FourierCoefficients(beta0=beta0, harmonics=harmonics)


def reconstruct_waveform(coefficients: FourierCoefficients, w: GradientWaveform, t) -> np.ndarray:
    """Truncated cosine series evaluated at t, T/m"""
    theta = 2.0 * np.pi * w.frequency * np.asarray(t, dtype=float) + w.phase
    total = np.full_like(theta, coefficients.beta0)
    for k, beta_k in enumerate(coefficients.harmonics, start=1):
        total = total + beta_k * np.cos(2 * k * theta)
    return total
