from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GridError
from ..linear.propagator import LinearState
from ..spectral import FrequencyGrid, SpectralField, VectorField, divergence_ratio


def clean(grid: FrequencyGrid, y: np.ndarray) -> np.ndarray:
    """Dealias, Leray-project the velocity rows and zero the mean of a stacked (3, n1, n2) state.

    Returns a new array; ``y`` is left untouched.
    """
    out = y * grid.dealias_mask
    k1, k2 = grid.xi1_odd, grid.xi2_odd
    proj = (k1 * out[0] + k2 * out[1]) * grid.inv_kodd_sq
    out[0] -= k1 * proj
    out[1] -= k2 * proj
    out[:, 0, 0] = 0.0
    return out


@dataclass(frozen=True, eq=False)
class NonlinearState:
    """Velocity and temperature perturbation of a nonlinear run.

    Solver output is dealiased, divergence-free and mean-free.
    """

    u: VectorField
    theta: SpectralField
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.u.grid != self.theta.grid:
            raise GridError("velocity and temperature live on different grids")

    @property
    def grid(self) -> FrequencyGrid:
        return self.theta.grid

    @classmethod
    def zeros(cls, grid: FrequencyGrid, t: float = 0.0) -> "NonlinearState":
        return cls(VectorField.zeros(grid), SpectralField.zeros(grid), t)

    @classmethod
    def from_stacked(cls, grid: FrequencyGrid, y: np.ndarray, t: float = 0.0) -> "NonlinearState":
        return cls(
            VectorField(
                SpectralField._wrap(grid, np.array(y[0], dtype=np.complex128)),
                SpectralField._wrap(grid, np.array(y[1], dtype=np.complex128)),
                solenoidal=True,
            ),
            SpectralField._wrap(grid, np.array(y[2], dtype=np.complex128)),
            t,
        )

    @classmethod
    def from_linear(cls, s: LinearState) -> "NonlinearState":
        return cls(s.u, s.theta, s.t)

    def to_linear(self) -> LinearState:
        return LinearState(self.u, self.theta, self.t)

    def stacked(self) -> np.ndarray:
        return np.stack([self.u.u1.coeffs, self.u.u2.coeffs, self.theta.coeffs])

    def cleaned(self) -> "NonlinearState":
        return NonlinearState.from_stacked(self.grid, clean(self.grid, self.stacked()), self.t)

    def is_clean(self, tol: float = 1e-10) -> bool:
        """Divergence-free, mean-free and zero outside the dealiased band."""
        y = self.stacked()
        scale = max(float(np.abs(y).max(initial=0.0)), 1e-300)
        outside = float(np.abs(y[:, ~self.grid.dealias_mask]).max(initial=0.0))
        mean = float(np.abs(y[:, 0, 0]).max())
        return divergence_ratio(self.u) <= tol and outside <= tol * scale and mean <= tol * scale
