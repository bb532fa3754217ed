from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.fft

from ..errors import GridError
from .grid import FrequencyGrid, fft_workers


def forward(grid: FrequencyGrid, values: np.ndarray) -> np.ndarray:
    """Physical samples -> Fourier-series amplitudes."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise GridError(f"expected samples of shape {grid.shape}, got {values.shape}")
    return scipy.fft.fft2(values, workers=fft_workers()) / (grid.n1 * grid.n2)


def inverse(grid: FrequencyGrid, coeffs: np.ndarray) -> np.ndarray:
    """Fourier-series amplitudes -> real physical samples."""
    return scipy.fft.ifft2(coeffs * (grid.n1 * grid.n2), workers=fft_workers()).real


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Complex Fourier amplitudes of a real scalar field.

    ``coeffs`` is a read-only array of shape ``grid.shape``; operations
    return new fields and never write into an existing one.
    """

    grid: FrequencyGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.complex128)
        if arr.shape != self.grid.shape:
            raise GridError(f"coefficients of shape {arr.shape} do not match grid {self.grid.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def _wrap(cls, grid: FrequencyGrid, coeffs: np.ndarray) -> "SpectralField":
        # Caller hands over ownership of a fresh complex128 array; skips the copy.
        field = object.__new__(cls)
        coeffs.setflags(write=False)
        object.__setattr__(field, "grid", grid)
        object.__setattr__(field, "coeffs", coeffs)
        return field

    @classmethod
    def zeros(cls, grid: FrequencyGrid) -> "SpectralField":
        return cls._wrap(grid, np.zeros(grid.shape, dtype=np.complex128))

    @classmethod
    def from_physical(cls, grid: FrequencyGrid, values: np.ndarray) -> "SpectralField":
        return cls._wrap(grid, np.asarray(forward(grid, values), dtype=np.complex128))

    @classmethod
    def from_modes(
        cls,
        grid: FrequencyGrid,
        modes: Mapping[tuple[int, int], complex],
        *,
        hermitian: bool = True,
    ) -> "SpectralField":
        """Field with the given amplitudes at signed lattice indices.

        With ``hermitian`` the conjugate amplitude is placed at the mirrored
        index so the field is real.
        """
        arr = np.zeros(grid.shape, dtype=np.complex128)
        for (i1, i2), amp in modes.items():
            pos = grid.position(i1, i2)
            arr[pos] += amp
            if hermitian:
                mirror = ((-i1) % grid.n1, (-i2) % grid.n2)
                if mirror == pos:
                    arr[pos] = arr[pos].real
                else:
                    arr[mirror] += np.conj(amp)
        return cls._wrap(grid, arr)

    def to_physical(self) -> np.ndarray:
        return inverse(self.grid, self.coeffs)

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, coeffs)

    def multiply(self, symbol: np.ndarray) -> "SpectralField":
        return SpectralField._wrap(self.grid, np.asarray(self.coeffs * symbol, dtype=np.complex128))

    def amplitude(self, i1: int, i2: int) -> complex:
        return complex(self.coeffs[self.grid.position(i1, i2)])

    def is_hermitian(self, rtol: float = 1e-12) -> bool:
        mirrored = np.conj(np.roll(np.flip(self.coeffs, axis=(0, 1)), shift=(1, 1), axis=(0, 1)))
        scale = max(float(np.abs(self.coeffs).max(initial=0.0)), 1e-300)
        return float(np.abs(self.coeffs - mirrored).max(initial=0.0)) <= rtol * scale

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max(initial=0.0))

    def _check(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise GridError("fields live on different grids")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField._wrap(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check(other)
        return SpectralField._wrap(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField._wrap(self.grid, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField._wrap(self.grid, -self.coeffs)


@dataclass(frozen=True, eq=False)
class VectorField:
    u1: SpectralField
    u2: SpectralField
    solenoidal: bool = False

    def __post_init__(self) -> None:
        if self.u1.grid != self.u2.grid:
            raise GridError("vector components live on different grids")

    @property
    def grid(self) -> FrequencyGrid:
        return self.u1.grid

    @classmethod
    def zeros(cls, grid: FrequencyGrid) -> "VectorField":
        return cls(SpectralField.zeros(grid), SpectralField.zeros(grid), solenoidal=True)

    @classmethod
    def from_physical(
        cls, grid: FrequencyGrid, v1: np.ndarray, v2: np.ndarray
    ) -> "VectorField":
        return cls(SpectralField.from_physical(grid, v1), SpectralField.from_physical(grid, v2))

    def to_physical(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u1.to_physical(), self.u2.to_physical()

    def components(self) -> tuple[SpectralField, SpectralField]:
        return self.u1, self.u2

    def max_abs(self) -> float:
        return max(self.u1.max_abs(), self.u2.max_abs())

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.u1 + other.u1, self.u2 + other.u2, solenoidal=self.solenoidal and other.solenoidal
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.u1 - other.u1, self.u2 - other.u2, solenoidal=self.solenoidal and other.solenoidal
        )

    def __mul__(self, scalar: complex) -> "VectorField":
        return VectorField(self.u1 * scalar, self.u2 * scalar, solenoidal=self.solenoidal)

    __rmul__ = __mul__
