"""
Physical constants, SI internally
"""
from dataclasses import dataclass, replace
from typing import Any, Dict

import scipy.constants as cst

from utilities.errors import DomainError

NEV = 1e-9 * cst.electron_volt
PEV = 1e-12 * cst.electron_volt
MICRON = 1e-6
MM = 1e-3
MILLITESLA = 1e-3


@dataclass(frozen=True)
class PhysicalConstants:
    """Single source of truth for the units of every module"""
    neutron_mass: float = cst.m_n
    g_local: float = 9.81
    hbar: float = cst.hbar
    mu_neutron_neV_per_T: float = 60.3
    mu0: float = cst.mu_0

    def __post_init__(self):
        for name in ("neutron_mass", "g_local", "hbar", "mu_neutron_neV_per_T", "mu0"):
            if getattr(self, name) <= 0:
                raise DomainError(f"Constant '{name}' must be strictly positive")

    @property
    def mu_neutron(self) -> float:
        """Magnetic moment as energy per field, J/T"""
        return self.mu_neutron_neV_per_T * NEV

    @property
    def gamma(self) -> float:
        """Gyromagnetic ratio 2 mu / hbar, rad/s/T"""
        return 2.0 * self.mu_neutron / self.hbar

    @property
    def weight(self) -> float:
        """Gravitational force m g, N"""
        return self.neutron_mass * self.g_local

    def with_overrides(self, overrides: Dict[str, Any]) -> "PhysicalConstants":
        """Copy with some fields replaced (unknown names rejected)"""
        return replace(self, **overrides)


DEFAULT_CONSTANTS = PhysicalConstants()
