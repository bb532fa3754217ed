"""
Discrete torus wavenumber lattice.

Index layout follows the standard FFT ordering on both axes: axis 0 carries
x1/xi1, axis 1 carries x2/xi2. Wavenumbers are ``index / L`` on the domain
[0, 2*pi*L1) x [0, 2*pi*L2). Derived arrays are built once per grid and
cached behind a lock; every cached array is read-only.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import GridError
from ..models import GridSpec

logger = logging.getLogger(__name__)

_CACHE: dict[tuple["FrequencyGrid", str], np.ndarray] = {}
_CACHE_LOCK = threading.Lock()

_FFT_WORKERS = 1


def set_fft_workers(n: int) -> None:
    """Set the ``workers`` argument passed to every scipy.fft call."""
    global _FFT_WORKERS
    _FFT_WORKERS = max(1, int(n))


def fft_workers() -> int:
    return _FFT_WORKERS


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrequencyGrid:
    n1: int
    n2: int
    L1: float = 1.0
    L2: float = 1.0

    def __post_init__(self) -> None:
        for name, n in (("n1", self.n1), ("n2", self.n2)):
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise GridError(f"{name} must be an integer, got {n!r}")
            if n < 4 or n % 2:
                raise GridError(f"{name} must be even and >= 4, got {n}", meta={name: n})
        for name, length in (("L1", self.L1), ("L2", self.L2)):
            if not (math.isfinite(length) and length > 0):
                raise GridError(f"{name} must be positive, got {length}", meta={name: length})
        object.__setattr__(self, "n1", int(self.n1))
        object.__setattr__(self, "n2", int(self.n2))
        object.__setattr__(self, "L1", float(self.L1))
        object.__setattr__(self, "L2", float(self.L2))

    @classmethod
    def from_spec(cls, spec: GridSpec) -> "FrequencyGrid":
        return cls(spec.n1, spec.n2, spec.L1, spec.L2)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def cellweight(self) -> float:
        """Plancherel weight for Fourier-series amplitudes: the domain area.

        Coefficients are ``fft2(f) / (n1 n2)``, so ||f||^2 = (2 pi)^2 L1 L2 sum |f_k|^2.
        Raw ``fft2`` output would pair with (2 pi)^2 L1 L2 / (n1 n2)^2 instead.
        """
        return (2.0 * math.pi) ** 2 * self.L1 * self.L2

    @property
    def cell_area(self) -> float:
        """Physical area of one collocation cell."""
        return self.cellweight / (self.n1 * self.n2)

    def _cached(self, name: str, build: Callable[[], np.ndarray]) -> np.ndarray:
        key = (self, name)
        with _CACHE_LOCK:
            hit = _CACHE.get(key)
        if hit is not None:
            return hit
        arr = _frozen(build())
        with _CACHE_LOCK:
            return _CACHE.setdefault(key, arr)

    # 1-D index and wavenumber vectors

    @property
    def index1(self) -> np.ndarray:
        return self._cached("index1", lambda: np.fft.fftfreq(self.n1, d=1.0 / self.n1).astype(np.int64))

    @property
    def index2(self) -> np.ndarray:
        return self._cached("index2", lambda: np.fft.fftfreq(self.n2, d=1.0 / self.n2).astype(np.int64))

    @property
    def k1(self) -> np.ndarray:
        return self._cached("k1", lambda: self.index1 / self.L1)

    @property
    def k2(self) -> np.ndarray:
        return self._cached("k2", lambda: self.index2 / self.L2)

    # 2-D broadcast arrays

    @property
    def xi1(self) -> np.ndarray:
        return self._cached("xi1", lambda: np.broadcast_to(self.k1[:, None], self.shape).copy())

    @property
    def xi2(self) -> np.ndarray:
        return self._cached("xi2", lambda: np.broadcast_to(self.k2[None, :], self.shape).copy())

    @property
    def xi1_odd(self) -> np.ndarray:
        """xi1 with the Nyquist row set to zero, for odd-order multipliers."""

        def build() -> np.ndarray:
            out = self.xi1.copy()
            out[self.n1 // 2, :] = 0.0
            return out

        return self._cached("xi1_odd", build)

    @property
    def xi2_odd(self) -> np.ndarray:
        def build() -> np.ndarray:
            out = self.xi2.copy()
            out[:, self.n2 // 2] = 0.0
            return out

        return self._cached("xi2_odd", build)

    @property
    def ksq(self) -> np.ndarray:
        return self._cached("ksq", lambda: self.xi1**2 + self.xi2**2)

    @property
    def inv_ksq(self) -> np.ndarray:
        """1/|xi|^2 with the zero mode mapped to 0."""

        def build() -> np.ndarray:
            ksq = self.ksq
            out = np.zeros_like(ksq)
            np.divide(1.0, ksq, out=out, where=ksq > 0)
            return out

        return self._cached("inv_ksq", build)

    @property
    def kodd_sq(self) -> np.ndarray:
        return self._cached("kodd_sq", lambda: self.xi1_odd**2 + self.xi2_odd**2)

    @property
    def inv_kodd_sq(self) -> np.ndarray:
        def build() -> np.ndarray:
            k2 = self.kodd_sq
            out = np.zeros_like(k2)
            np.divide(1.0, k2, out=out, where=k2 > 0)
            return out

        return self._cached("inv_kodd_sq", build)

    # masks

    @property
    def origin_mask(self) -> np.ndarray:
        def build() -> np.ndarray:
            out = np.zeros(self.shape, dtype=bool)
            out[0, 0] = True
            return out

        return self._cached("origin", build)

    @property
    def nyquist_mask(self) -> np.ndarray:
        """True on the Nyquist row and column."""

        def build() -> np.ndarray:
            out = np.zeros(self.shape, dtype=bool)
            out[self.n1 // 2, :] = True
            out[:, self.n2 // 2] = True
            return out

        return self._cached("nyquist", build)

    @property
    def resolved_mask(self) -> np.ndarray:
        """Modes that carry dynamics: neither the origin nor a Nyquist line."""
        return self._cached("resolved", lambda: ~(self.origin_mask | self.nyquist_mask))

    @property
    def dealias_mask(self) -> np.ndarray:
        def build() -> np.ndarray:
            keep1 = np.abs(self.index1) <= self.n1 / 3.0
            keep2 = np.abs(self.index2) <= self.n2 / 3.0
            return keep1[:, None] & keep2[None, :]

        return self._cached("dealias", build)

    # physical coordinates

    @property
    def x1(self) -> np.ndarray:
        return self._cached(
            "x1",
            lambda: np.broadcast_to(
                (2.0 * math.pi * self.L1 * np.arange(self.n1) / self.n1)[:, None], self.shape
            ).copy(),
        )

    @property
    def x2(self) -> np.ndarray:
        return self._cached(
            "x2",
            lambda: np.broadcast_to(
                (2.0 * math.pi * self.L2 * np.arange(self.n2) / self.n2)[None, :], self.shape
            ).copy(),
        )

    def position(self, i1: int, i2: int) -> tuple[int, int]:
        """Array position of the signed lattice index (i1, i2)."""
        if not (-self.n1 // 2 <= i1 < self.n1 // 2 and -self.n2 // 2 <= i2 < self.n2 // 2):
            raise GridError(f"mode index ({i1}, {i2}) outside the {self.n1}x{self.n2} lattice")
        return (i1 % self.n1, i2 % self.n2)

    def max_wavenumber(self) -> float:
        return float(np.sqrt(self.ksq.max()))


def make_grid(n1: int, n2: int, L1: float = 1.0, L2: float = 1.0) -> FrequencyGrid:
    grid = FrequencyGrid(n1, n2, L1, L2)
    logger.debug("grid %dx%d L=(%g, %g)", grid.n1, grid.n2, grid.L1, grid.L2)
    return grid


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()
