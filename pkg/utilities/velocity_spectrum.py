"""
Discretized UCN horizontal velocity spectrum used for ensemble averages
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class VelocitySpectrum:
    """Truncated Gaussian v_x distribution of the flow-through beam"""
    mean: float = 4.0
    sigma: float = 1.5
    v_min: float = 0.5
    v_max: float = 8.5
    n_nodes: int = 9
    weighting: str = "density"

    def __post_init__(self):
        if self.sigma <= 0:
            raise DomainError(f"Velocity sigma must be positive, got {self.sigma}")
        if not 0 < self.v_min < self.v_max:
            raise DomainError(
                f"Velocity truncation must satisfy 0 < v_min < v_max, got [{self.v_min}, {self.v_max}]"
            )
        if self.n_nodes < 1:
            raise DomainError(f"Need at least one velocity node, got {self.n_nodes}")
        if self.weighting not in ("density", "flux"):
            raise DomainError(f"Unknown velocity weighting '{self.weighting}'")

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Quadrature nodes and normalized weights

        Gauss-Legendre nodes on [v_min, v_max]; each weight is multiplied by
        the Gaussian density (and by v for flux weighting), then the set is
        renormalized to sum to one.

        Returns:
            (velocities m/s, weights) as increasing-velocity arrays
        """
        x, w = np.polynomial.legendre.leggauss(self.n_nodes)
        half = 0.5 * (self.v_max - self.v_min)
        v = self.v_min + half * (x + 1.0)
        density = np.exp(-0.5 * ((v - self.mean) / self.sigma) ** 2)
        weights = w * half * density
        if self.weighting == "flux":
            weights = weights * v
        return v, weights / weights.sum()

    @classmethod
    def single(cls, velocity: float) -> "VelocitySpectrum":
        """Degenerate spectrum concentrated on one velocity"""
        return cls(mean=velocity, sigma=1.0, v_min=velocity * (1 - 1e-12),
                   v_max=velocity * (1 + 1e-12), n_nodes=1)
