"""
Field of the 128-wire excitation array at the mirror surface

Coordinates: x along the mirror (across the wires), z up from the mirror
surface. Wires run along y and are treated as infinitely long. SI units
throughout; conversion to mm / mT happens only on export.
"""
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utilities.errors import DomainError
from utilities.sweep_runner import run_cells
from .square_wire import square_wire_field, square_wire_gradient

# |B| below this is treated as a field zero where d|B|/dz is undefined
ZERO_FIELD_T = 1e-12

DC_MODE_FIELD = (1.5e-3, 0.0, 1.5e-3)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WireArrayConfig:
    """Geometry and current pattern of the wire array"""
    wire_side: float = 1.0e-3
    gap: float = 0.25e-3
    n_wires: int = 128
    standoff: float = 0.8e-3
    currents: Tuple[float, float, float, float] = (1.4, 3.5, 3.5, 1.4)
    external_field: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    module_count: int = 4

    def __post_init__(self):
        if self.wire_side <= 0:
            raise DomainError(f"Wire side must be positive, got {self.wire_side}")
        if self.gap < 0:
            raise DomainError(f"Gap must be non-negative, got {self.gap}")
        if self.standoff <= 0:
            raise DomainError(f"Standoff must be positive, got {self.standoff}")
        if self.n_wires < 8 or self.n_wires % 8:
            raise DomainError(f"n_wires must be a positive multiple of 8, got {self.n_wires}")
        if self.module_count < 1 or self.n_wires % self.module_count:
            raise DomainError(
                f"n_wires ({self.n_wires}) must split evenly into {self.module_count} modules"
            )
        if len(self.currents) != 4:
            raise DomainError("Current pattern needs exactly four amplitudes I1..I4")
        if len(self.external_field) != 3:
            raise DomainError("External field must be a 3-vector (Bx, By, Bz)")
        object.__setattr__(self, "currents", tuple(float(i) for i in self.currents))
        object.__setattr__(self, "external_field", tuple(float(b) for b in self.external_field))

    @property
    def pitch(self) -> float:
        return self.wire_side + self.gap

    @property
    def period(self) -> float:
        """Spatial period of the 8-wire current pattern, m"""
        return 8 * self.pitch

    @property
    def wires_per_module(self) -> int:
        return self.n_wires // self.module_count

    @property
    def center_height(self) -> float:
        """Height of the wire centers above the mirror, m"""
        return self.standoff + 0.5 * self.wire_side

    @property
    def span(self) -> float:
        return self.n_wires * self.pitch

    def wire_positions(self) -> np.ndarray:
        """x of every wire center, array centered on x = 0"""
        return (np.arange(self.n_wires) - 0.5 * (self.n_wires - 1)) * self.pitch

    def wire_currents(self) -> np.ndarray:
        """I1, I2, I3, I4, -I1, -I2, -I3, -I4 tiled over the array"""
        pattern = np.array(self.currents + tuple(-i for i in self.currents))
        return np.tile(pattern, self.n_wires // 8)

    def scaled(self, factor: float) -> "WireArrayConfig":
        return replace(self, currents=tuple(factor * i for i in self.currents))

    def with_external_field(self, field: Sequence[float]) -> "WireArrayConfig":
        return replace(self, external_field=tuple(field))

    def central_window(self, fraction: float = 0.8) -> Tuple[float, float]:
        """x-interval covering the central fraction of the array span"""
        if not 0 < fraction <= 1:
            raise DomainError(f"Window fraction must be in (0, 1], got {fraction}")
        half = 0.5 * fraction * self.span
        return -half, half


@dataclass(frozen=True)
class FieldSample:
    """Field, vertical derivatives and d|B|/dz at one point (SI)"""
    x: float
    z: float
    Bx: float
    By: float
    Bz: float
    dBx_dz: float
    dBz_dz: float
    grad_absB: float
    singular: bool = False

    @property
    def abs_B(self) -> float:
        return float(np.sqrt(self.Bx ** 2 + self.By ** 2 + self.Bz ** 2))


@dataclass(frozen=True)
class FieldMap:
    """Array form of a field scan, index-aligned with x"""
    x: np.ndarray
    z: float
    Bx: np.ndarray
    By: np.ndarray
    Bz: np.ndarray
    dBx_dz: np.ndarray
    dBz_dz: np.ndarray
    grad_absB: np.ndarray
    singular: np.ndarray

    @property
    def abs_B(self) -> np.ndarray:
        return np.sqrt(self.Bx ** 2 + self.By ** 2 + self.Bz ** 2)

    def window(self, x_min: float, x_max: float) -> np.ndarray:
        """Boolean mask of samples with x_min <= x <= x_max"""
        return (self.x >= x_min) & (self.x <= x_max)

    def samples(self) -> List[FieldSample]:
        return [
            FieldSample(
                x=float(self.x[i]), z=self.z,
                Bx=float(self.Bx[i]), By=float(self.By[i]), Bz=float(self.Bz[i]),
                dBx_dz=float(self.dBx_dz[i]), dBz_dz=float(self.dBz_dz[i]),
                grad_absB=float(self.grad_absB[i]), singular=bool(self.singular[i])
            )
            for i in range(len(self.x))
        ]


def _superpose(config: WireArrayConfig, x: np.ndarray, z: float):
    """Sum of all wire contributions at points (x, z); shape of x preserved"""
    positions = config.wire_positions()
    currents = config.wire_currents()
    # (points, wires) relative coordinates
    dx = x[:, None] - positions[None, :]
    dz = np.full_like(dx, z - config.center_height)
    try:
        bx, bz = square_wire_field(dx, dz, 1.0, config.wire_side)
        gx, gz = square_wire_gradient(dx, dz, 1.0, config.wire_side)
    except DomainError:
        raise DomainError(f"Evaluation point at z={z:.4e} m lies inside a wire") from None
    # row-wise sums keep each point independent of how the grid is chunked
    return (
        (bx * currents).sum(axis=1), (bz * currents).sum(axis=1),
        (gx * currents).sum(axis=1), (gz * currents).sum(axis=1),
    )


def _field_arrays(config: WireArrayConfig, x: np.ndarray, z: float) -> FieldMap:
    bx, bz, dbx_dz, dbz_dz = _superpose(config, x, z)
    b0x, b0y, b0z = config.external_field
    bx = bx + b0x
    bz = bz + b0z
    by = np.full_like(bx, b0y)
    abs_b = np.sqrt(bx * bx + by * by + bz * bz)
    singular = abs_b <= ZERO_FIELD_T
    safe = np.where(singular, 1.0, abs_b)
    # uniform external field has no z-derivative
    grad = np.where(singular, np.nan, (bx * dbx_dz + bz * dbz_dz) / safe)
    return FieldMap(
        x=x, z=z, Bx=bx, By=by, Bz=bz, dBx_dz=dbx_dz, dBz_dz=dbz_dz,
        grad_absB=grad, singular=singular
    )


def array_field(config: WireArrayConfig, x: float, z: float) -> FieldSample:
    """
    Superposed array field plus external field at one point

    Args:
        config: Wire array
        x: Horizontal position, m
        z: Height above the mirror, m

    Returns:
        FieldSample with grad_absB = (Bx dBx/dz + Bz dBz/dz) / |B|
    """
    return _field_arrays(config, np.array([float(x)]), float(z)).samples()[0]


def field_map_arrays(
    config: WireArrayConfig,
    z: float,
    x_range: Tuple[float, float],
    n_points: int,
    workers: Optional[int] = 1
) -> FieldMap:
    """Uniform-grid scan along x at height z, as arrays"""
    if n_points < 2:
        raise DomainError(f"n_points must be >= 2, got {n_points}")
    x_min, x_max = x_range
    if not x_max > x_min:
        raise DomainError(f"Empty x range [{x_min}, {x_max}]")
    x = np.linspace(x_min, x_max, n_points)

    if workers == 1:
        return _field_arrays(config, x, z)

    chunks = np.array_split(x, max(1, min(n_points, workers or 1) * 4))
    parts = run_cells(lambda chunk: _field_arrays(config, chunk, z), chunks, workers)
    return FieldMap(
        x=x, z=z,
        **{name: np.concatenate([getattr(p, name) for p in parts])
           for name in ("Bx", "By", "Bz", "dBx_dz", "dBz_dz", "grad_absB", "singular")}
    )


def field_map(
    config: WireArrayConfig,
    z: float,
    x_range: Tuple[float, float],
    n_points: int,
    workers: Optional[int] = 1
) -> List[FieldSample]:
    """
    Uniform-grid scan along x at height z

    Args:
        config: Wire array
        z: Height above the mirror, m
        x_range: (x_min, x_max), m
        n_points: Grid size (>= 2)
        workers: Thread count for chunked evaluation

    Returns:
        FieldSample list in grid order
    """
    return field_map_arrays(config, z, x_range, n_points, workers).samples()


def extract_excitation_params(
    config: WireArrayConfig,
    fraction: float = 0.8,
    n_points: int = 4001
) -> Tuple[float, float]:
    """
    Gradient amplitude and field amplitude of the AC drive at peak current

    beta_hat is the mean d|B|/dz over the central window at z = 0 with the
    external field removed; B1 is the mean |B| over the same window (the
    field rotates in the x-z plane with nearly constant magnitude).

    Returns:
        (beta_hat T/m, B1 T)
    """
    if not any(config.currents):
        raise DomainError("All pattern currents are zero; no excitation to extract")
    bare = config.with_external_field((0.0, 0.0, 0.0))
    scan = field_map_arrays(bare, 0.0, bare.central_window(fraction), n_points)
    regular = ~scan.singular
    beta_hat = float(np.mean(scan.grad_absB[regular]))
    b1 = float(np.mean(scan.abs_B))
    logger.debug(f"Extracted beta_hat={beta_hat:.4f} T/m, B1={b1 * 1e3:.4f} mT")
    return beta_hat, b1


def dc_mode_config(
    config: WireArrayConfig,
    external_field: Sequence[float] = DC_MODE_FIELD
) -> WireArrayConfig:
    """Same array with the strong in-plane external field of the DC mode"""
    return config.with_external_field(external_field)


@dataclass(frozen=True)
class RippleSpectrum:
    """Dominant spatial component of the gradient residual"""
    wavelength: float
    amplitude: float
    peak_deviation: float
    frequency: Optional[float] = None


def ripple_spectrum(scan: FieldMap, velocity: Optional[float] = None) -> RippleSpectrum:
    """
    FFT of grad_absB minus its mean over a scan

    Args:
        scan: Field map restricted to the region of interest
        velocity: Horizontal speed converting wavelength to frequency, m/s

    Returns:
        RippleSpectrum (wavelength m, amplitude T/m, frequency Hz if velocity given)
    """
    grad = scan.grad_absB
    if np.any(~np.isfinite(grad)):
        raise DomainError("Ripple analysis needs a scan without field zeros")
    residual = grad - grad.mean()
    n = len(residual)
    spacing = scan.x[1] - scan.x[0]
    amplitudes = 2.0 * np.abs(np.fft.rfft(residual)) / n
    wavenumbers = np.fft.rfftfreq(n, d=spacing)
    index = int(np.argmax(amplitudes[1:]) + 1)
    wavelength = 1.0 / wavenumbers[index]
    return RippleSpectrum(
        wavelength=float(wavelength),
        amplitude=float(amplitudes[index]),
        peak_deviation=float(np.max(np.abs(residual))),
        frequency=None if velocity is None else float(velocity / wavelength)
    )


def gradient_profile(config: WireArrayConfig, x: float, z_values: Sequence[float]) -> np.ndarray:
    """d|B|/dz at fixed x for several heights, T/m"""
    return np.array([array_field(config, x, float(z)).grad_absB for z in z_values])


def zero_crossings(scan: FieldMap) -> np.ndarray:
    """x positions where grad_absB changes sign (linear interpolation)"""
    grad = scan.grad_absB
    sign_change = np.nonzero(np.signbit(grad[:-1]) != np.signbit(grad[1:]))[0]
    x0, x1 = scan.x[sign_change], scan.x[sign_change + 1]
    g0, g1 = grad[sign_change], grad[sign_change + 1]
    return x0 - g0 * (x1 - x0) / (g1 - g0)
