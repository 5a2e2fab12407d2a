"""
Validated run configuration

Every physical quantity is given in the units of its key suffix (_mm, _mT,
_m, _s, _Hz); conversion to SI happens in the builder methods.
"""
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from bouncer.constants import MM, MILLITESLA, PhysicalConstants
from magnetics.wire_array import WireArrayConfig
from transitions.waveform import ExcitationModel
from utilities.velocity_spectrum import VelocitySpectrum

DEFAULT_BETA_HAT = 0.52
DEFAULT_B1_MT = 0.8


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


def frequency_grid(f_min: float, f_max: float, f_step: float) -> np.ndarray:
    """Inclusive uniform grid from f_min to f_max"""
    count = int(round((f_max - f_min) / f_step)) + 1
    return f_min + f_step * np.arange(count)


class ConstantsSection(Section):
    neutron_mass: Optional[PositiveFloat] = None
    g_local: Optional[PositiveFloat] = None
    hbar: Optional[PositiveFloat] = None
    mu_neutron_neV_per_T: Optional[PositiveFloat] = None
    mu0: Optional[PositiveFloat] = None

    def build(self) -> PhysicalConstants:
        return PhysicalConstants().with_overrides(self.model_dump(exclude_none=True))


class WireArraySection(Section):
    wire_side_mm: PositiveFloat = 1.0
    gap_mm: float = Field(0.25, ge=0)
    n_wires: PositiveInt = 128
    standoff_mm: PositiveFloat = 0.8
    currents_A: Tuple[float, float, float, float] = (1.4, 3.5, 3.5, 1.4)
    external_field_mT: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    module_count: PositiveInt = 4

    @field_validator("n_wires")
    @classmethod
    def _tiles_pattern(cls, value: int) -> int:
        if value % 8:
            raise ValueError("must be a multiple of 8 so the current pattern tiles exactly")
        return value

    @model_validator(mode="after")
    def _splits_into_modules(self):
        if self.n_wires % self.module_count:
            raise ValueError(f"n_wires ({self.n_wires}) must split evenly into {self.module_count} modules")
        return self

    def build(self) -> WireArrayConfig:
        return WireArrayConfig(
            wire_side=self.wire_side_mm * MM,
            gap=self.gap_mm * MM,
            n_wires=self.n_wires,
            standoff=self.standoff_mm * MM,
            currents=self.currents_A,
            external_field=tuple(b * MILLITESLA for b in self.external_field_mT),
            module_count=self.module_count,
        )


class ExcitationSection(Section):
    beta_hat: Optional[float] = Field(None, ge=0)
    B1_mT: Optional[float] = Field(None, ge=0)
    B0y_mT: PositiveFloat = 0.3
    derive_from_array: bool = False

    @model_validator(mode="after")
    def _exclusive_sources(self):
        if self.derive_from_array and (self.beta_hat is not None or self.B1_mT is not None):
            raise ValueError("derive_from_array cannot be combined with explicit beta_hat or B1_mT")
        return self

    def build(self) -> ExcitationModel:
        """Explicit parameters (benchmark defaults where unset)"""
        beta_hat = DEFAULT_BETA_HAT if self.beta_hat is None else self.beta_hat
        b1 = DEFAULT_B1_MT if self.B1_mT is None else self.B1_mT
        return ExcitationModel(beta_hat=beta_hat, B1=b1 * MILLITESLA, B0y=self.B0y_mT * MILLITESLA)


class VelocitySection(Section):
    mean: PositiveFloat = 4.0
    sigma: PositiveFloat = 1.5
    v_min: PositiveFloat = 0.5
    v_max: PositiveFloat = 8.5
    n_nodes: PositiveInt = 9
    weighting: Literal["density", "flux"] = "density"

    @model_validator(mode="after")
    def _ordered(self):
        if self.v_min >= self.v_max:
            raise ValueError(f"v_min ({self.v_min}) must be below v_max ({self.v_max})")
        return self

    def build(self) -> VelocitySpectrum:
        return VelocitySpectrum(**self.model_dump())


class TransitionRegionSection(Section):
    length_m: PositiveFloat = 0.16
    spatial_period_m: PositiveFloat = 0.01


class SinglePoint(Section):
    f_Hz: float = Field(ge=0, le=1000)
    B0y_mT: PositiveFloat
    velocity: PositiveFloat
    phase: float = 0.0


class AdiabaticitySection(Section):
    B0y_mT: List[PositiveFloat] = [0.05, 0.1, 0.3, 1.0, 10.0]
    f_min_Hz: float = Field(0.0, ge=0, le=1000)
    f_max_Hz: float = Field(300.0, ge=0, le=1000)
    f_step_Hz: PositiveFloat = 10.0
    frequencies_Hz: Optional[List[float]] = None
    phase_samples: int = Field(16, ge=4)
    B1_mT: PositiveFloat = 0.8
    single_point: Optional[SinglePoint] = None

    @field_validator("B0y_mT")
    @classmethod
    def _non_empty(cls, value):
        if not value:
            raise ValueError("needs at least one holding field")
        return value

    @field_validator("frequencies_Hz")
    @classmethod
    def _valid_frequencies(cls, value):
        if value is not None:
            if not value:
                raise ValueError("frequency list is empty")
            if any(f < 0 or f > 1000 for f in value):
                raise ValueError("frequencies must lie in [0, 1000] Hz")
        return value

    @model_validator(mode="after")
    def _ordered(self):
        if self.f_max_Hz < self.f_min_Hz:
            raise ValueError("f_max_Hz must not be below f_min_Hz")
        return self

    def frequencies(self) -> np.ndarray:
        if self.frequencies_Hz is not None:
            return np.asarray(self.frequencies_Hz, dtype=float)
        return frequency_grid(self.f_min_Hz, self.f_max_Hz, self.f_step_Hz)


class ResonanceSection(Section):
    f_min_Hz: float = Field(80.0, ge=0)
    f_max_Hz: float = Field(180.0, ge=0)
    f_step_Hz: PositiveFloat = 0.5
    phase_samples: PositiveInt = 16
    initial_state: PositiveInt = 2
    final_state: PositiveInt = 1
    drive: Literal["full", "harmonic"] = "full"
    single_velocity: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def _consistent(self):
        if self.f_max_Hz < self.f_min_Hz:
            raise ValueError("f_max_Hz must not be below f_min_Hz")
        if self.initial_state == self.final_state:
            raise ValueError("initial_state and final_state must differ")
        return self

    def frequencies(self) -> np.ndarray:
        return frequency_grid(self.f_min_Hz, self.f_max_Hz, self.f_step_Hz)


class FieldMapSection(Section):
    mode: Literal["ac", "dc"] = "ac"
    z_mm: float = Field(0.0, ge=0)
    x_min_mm: Optional[float] = None
    x_max_mm: Optional[float] = None
    n_points: int = Field(2001, ge=2)
    window_fraction: float = Field(0.8, gt=0, le=1)
    dc_external_field_mT: Tuple[float, float, float] = (1.5, 0.0, 1.5)
    ripple_velocity: PositiveFloat = 4.0

    @model_validator(mode="after")
    def _range(self):
        if (self.x_min_mm is None) != (self.x_max_mm is None):
            raise ValueError("give both x_min_mm and x_max_mm or neither")
        if self.x_min_mm is not None and self.x_max_mm <= self.x_min_mm:
            raise ValueError("x range is empty")
        return self


class EigenSection(Section):
    n_states: int = Field(4, ge=1, le=100)
    excitation_time_s: PositiveFloat = 0.04
    transitions: List[Tuple[PositiveInt, PositiveInt]] = [(2, 1), (3, 1)]


class FourierSection(Section):
    n_harmonics: int = Field(4, ge=1)
    n_points: int = Field(4096, ge=16)
    frequency_Hz: PositiveFloat = 100.0
    phase: float = 0.0
    samples: int = Field(201, ge=2)


class SolverSection(Section):
    n_states: int = Field(4, ge=2, le=100)
    bloch_phase_budget: float = Field(0.02, gt=0, lt=0.1)
    schrodinger_phase_budget: float = Field(0.03, gt=0, lt=0.05)
    workers: Optional[PositiveInt] = None


class OutputSection(Section):
    directory: str = "results"
    format: Literal["csv", "json"] = "csv"


class LoggingSection(Section):
    enabled: bool = True
    log_file: Optional[str] = "logs/granit_simulation.log"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper(cls, value):
        return value.upper() if isinstance(value, str) else value


class RunConfig(Section):
    """Complete configuration of one CLI run"""
    constants: ConstantsSection = ConstantsSection()
    wire_array: WireArraySection = WireArraySection()
    excitation: ExcitationSection = ExcitationSection()
    velocity: VelocitySection = VelocitySection()
    transition_region: TransitionRegionSection = TransitionRegionSection()
    adiabaticity: AdiabaticitySection = AdiabaticitySection()
    resonance: ResonanceSection = ResonanceSection()
    field_map: FieldMapSection = FieldMapSection()
    eigen: EigenSection = EigenSection()
    fourier: FourierSection = FourierSection()
    solver: SolverSection = SolverSection()
    output: OutputSection = OutputSection()
    logging: LoggingSection = LoggingSection()

    @model_validator(mode="after")
    def _state_indices(self):
        n = self.solver.n_states
        for name in ("initial_state", "final_state"):
            if getattr(self.resonance, name) > n:
                raise ValueError(f"resonance.{name} exceeds solver.n_states ({n})")
        for n_idx, m_idx in self.eigen.transitions:
            if n_idx == m_idx or max(n_idx, m_idx) > self.eigen.n_states:
                raise ValueError(f"eigen transition ({n_idx}, {m_idx}) invalid for {self.eigen.n_states} states")
        return self

    @model_validator(mode="after")
    def _scan_below_wires(self):
        if self.field_map.z_mm >= self.wire_array.standoff_mm:
            raise ValueError(
                f"field_map.z_mm ({self.field_map.z_mm}) must lie below the wire bottom faces "
                f"(wire_array.standoff_mm = {self.wire_array.standoff_mm})"
            )
        return self
