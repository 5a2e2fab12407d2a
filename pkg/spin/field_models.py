"""
Magnetic field seen by a neutron in its rest frame while passing under the array

All models expose the same interface: field(t) for inspection and
kernel_args() packing the model into plain arrays for the compiled
integrator.
"""
from dataclasses import dataclass, field as dc_field
from typing import Tuple

import numpy as np

from utilities.errors import DomainError

# kernel dispatch codes
REST_FRAME = 0
ROTATING = 1
ARRAY_MAP = 2

_EMPTY = np.zeros(1)


@dataclass(frozen=True)
class RestFrameFieldModel:
    """
    Analytic field of the AC-driven array along a straight horizontal path

    Bx = B1 cos(2 pi f t + phi) sin(2 pi v t / d)
    By = B0y
    Bz = -B1 cos(2 pi f t + phi) cos(2 pi v t / d)
    """
    B1: float = 0.8e-3
    B0y: float = 0.3e-3
    period: float = 0.01
    frequency: float = 150.0
    phase: float = 0.0
    velocity: float = 4.0

    def __post_init__(self):
        if self.B1 < 0 or self.B0y < 0:
            raise DomainError("Field amplitudes must be non-negative")
        if self.period <= 0:
            raise DomainError(f"Spatial period must be positive, got {self.period}")
        if self.frequency < 0:
            raise DomainError(f"Driving frequency must be non-negative, got {self.frequency}")
        if self.velocity < 0:
            raise DomainError(f"Velocity must be non-negative, got {self.velocity}")

    @property
    def max_field(self) -> float:
        return float(np.hypot(self.B1, self.B0y))

    def field(self, t) -> np.ndarray:
        """B(t), T; shape (..., 3)"""
        t = np.asarray(t, dtype=float)
        drive = self.B1 * np.cos(2 * np.pi * self.frequency * t + self.phase)
        angle = 2 * np.pi * self.velocity * t / self.period
        return np.stack(
            [drive * np.sin(angle), np.full_like(t, self.B0y), -drive * np.cos(angle)], axis=-1
        )

    def kernel_args(self) -> Tuple[int, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        params = np.array([self.B1, self.B0y, self.period, self.frequency, self.phase, self.velocity])
        return REST_FRAME, params, _EMPTY, _EMPTY, _EMPTY


@dataclass(frozen=True)
class RotatingFieldModel:
    """Field of constant magnitude rotating about y at angular rate omega"""
    magnitude: float = 1.0e-3
    omega: float = 1.0e3

    def __post_init__(self):
        if self.magnitude <= 0:
            raise DomainError(f"Field magnitude must be positive, got {self.magnitude}")

    @property
    def max_field(self) -> float:
        return self.magnitude

    def field(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        angle = self.omega * t
        return np.stack(
            [self.magnitude * np.sin(angle), np.zeros_like(t), self.magnitude * np.cos(angle)], axis=-1
        )

    def kernel_args(self):
        params = np.array([self.magnitude, self.omega, 0.0, 0.0, 0.0, 0.0])
        return ROTATING, params, _EMPTY, _EMPTY, _EMPTY

    def adiabatic_pmax(self, gamma: float) -> float:
        """Closed-form maximum flip probability sin^2(theta), tan(theta) = omega / (gamma B)"""
        theta = np.arctan2(abs(self.omega), gamma * self.magnitude)
        return float(np.sin(theta) ** 2)


@dataclass(frozen=True)
class ArrayMapFieldModel:
    """
    Rest-frame field from a tabulated wire-array map

    The static map at peak current is scaled by cos(2 pi f t + phi) and the
    holding field B0y is added. The neutron moves at x(t) = x_start + v t.
    """
    x_table: np.ndarray = dc_field(repr=False)
    bx_table: np.ndarray = dc_field(repr=False)
    bz_table: np.ndarray = dc_field(repr=False)
    B0y: float = 0.3e-3
    frequency: float = 150.0
    phase: float = 0.0
    velocity: float = 4.0
    x_start: float = -0.08

    def __post_init__(self):
        if not len(self.x_table) == len(self.bx_table) == len(self.bz_table) >= 2:
            raise DomainError("Field tables must be aligned and hold at least two samples")
        if self.velocity <= 0:
            raise DomainError(f"Velocity must be positive, got {self.velocity}")

    @classmethod
    def from_field_map(cls, scan, **kwargs) -> "ArrayMapFieldModel":
        """Build from a magnetics FieldMap (taken without external field)"""
        kwargs.setdefault("x_start", float(scan.x[0]))
        return cls(
            x_table=np.ascontiguousarray(scan.x, dtype=float),
            bx_table=np.ascontiguousarray(scan.Bx, dtype=float),
            bz_table=np.ascontiguousarray(scan.Bz, dtype=float),
            **kwargs
        )

    @property
    def max_field(self) -> float:
        peak = np.max(np.hypot(self.bx_table, self.bz_table))
        return float(np.hypot(peak, self.B0y))

    def field(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = self.x_start + self.velocity * t
        drive = np.cos(2 * np.pi * self.frequency * t + self.phase)
        bx = drive * np.interp(x, self.x_table, self.bx_table)
        bz = drive * np.interp(x, self.x_table, self.bz_table)
        return np.stack([bx, np.full_like(t, self.B0y), bz], axis=-1)

    def kernel_args(self):
        params = np.array([0.0, self.B0y, self.x_start, self.frequency, self.phase, self.velocity])
        return ARRAY_MAP, params, self.x_table, self.bx_table, self.bz_table
