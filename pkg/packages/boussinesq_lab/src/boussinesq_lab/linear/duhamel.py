"""
Forced damped wave equation f'' + p f' + q f = F, solved mode-wise as

    f(t) = G1(t) f1 + G2(t) f0 + int_0^t G1(t - tau) F(tau) dtau.

The convolution is evaluated with composite Simpson quadrature on the
forcing's sample mesh.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from ..errors import GridError, InvalidInputError, QuadratureError
from ..kernels.symbols import g_functions, roots_from_coefficients, symbol_coefficients
from ..models import Params
from ..spectral import FrequencyGrid, SpectralField

_MESH_RTOL = 1e-9


def _mesh(t: float, n: int, times: Sequence[float] | None) -> np.ndarray:
    if n < 3:
        raise QuadratureError(f"Simpson quadrature needs at least 3 forcing samples, got {n}")
    if t < 0:
        raise InvalidInputError(f"time must be >= 0, got {t}")
    if times is None:
        return np.linspace(0.0, t, n)
    ts = np.asarray(times, dtype=float)
    if ts.size != n:
        raise QuadratureError(f"{n} forcing samples but {ts.size} sample times")
    h = t / (n - 1)
    tol = _MESH_RTOL * max(t, 1.0)
    if abs(ts[0]) > tol or abs(ts[-1] - t) > tol or np.any(np.abs(np.diff(ts) - h) > tol):
        raise QuadratureError("forcing must be sampled on a uniform mesh covering [0, t]")
    return ts


def _grid_roots(grid: FrequencyGrid, p: Params) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # The origin keeps the double root 0, so G1(s) = s there.
    live = ~grid.nyquist_mask
    damping, stiffness = symbol_coefficients(grid.xi1[live], grid.xi2[live], p)
    l1, l2 = roots_from_coefficients(damping, stiffness)
    return live, l1, l2


def duhamel_apply(
    forcing: Sequence[SpectralField],
    t: float,
    p: Params,
    *,
    times: Sequence[float] | None = None,
) -> SpectralField:
    """int_0^t G1(xi, t - tau) F(xi, tau) dtau for every mode (zero on Nyquist lines)."""
    if not forcing:
        raise QuadratureError("empty forcing series")
    grid = forcing[0].grid
    for f in forcing[1:]:
        if f.grid != grid:
            raise GridError("forcing samples live on different grids")
    ts = _mesh(t, len(forcing), times)
    live, l1, l2 = _grid_roots(grid, p)
    lags = (t - ts)[:, None]
    G1, _ = g_functions(l1[None, :], l2[None, :], np.maximum(lags, 0.0))
    samples = np.stack([f.coeffs[live] for f in forcing])
    integral = simpson(np.asarray(G1) * samples, x=ts, axis=0)
    out = np.zeros(grid.shape, dtype=np.complex128)
    out[live] = integral
    return SpectralField._wrap(grid, out)


def duhamel_scalar(
    lambda1: complex,
    lambda2: complex,
    forcing: Sequence[complex] | np.ndarray,
    t: float,
    *,
    times: Sequence[float] | None = None,
) -> complex:
    """Scalar version of duhamel_apply for given roots."""
    values = np.asarray(forcing, dtype=np.complex128)
    ts = _mesh(t, values.size, times)
    G1, _ = g_functions(np.full(ts.size, lambda1), np.full(ts.size, lambda2), np.maximum(t - ts, 0.0))
    return complex(simpson(np.asarray(G1) * values, x=ts))


def _phi1(z: np.ndarray | complex) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    safe = np.where(z == 0, 1.0, z)
    return np.where(z == 0, 1.0, np.expm1(safe) / safe)


def g1_integral(lambda1: complex, lambda2: complex, t: float) -> complex:
    """Closed form of int_0^t G1(s) ds."""
    l1, l2 = complex(lambda1), complex(lambda2)
    if l1 == l2:
        if l1 == 0:
            return 0.5 * t * t
        return complex((np.exp(l1 * t) * (l1 * t - 1.0) + 1.0) / (l1 * l1))
    return complex((t * _phi1(l1 * t) - t * _phi1(l2 * t)) / (l1 - l2))


def wave_solution(
    f0: SpectralField,
    f1: SpectralField,
    forcing: Sequence[SpectralField],
    t: float,
    p: Params,
    *,
    times: Sequence[float] | None = None,
) -> SpectralField:
    """Full variation-of-constants solution at time ``t``."""
    grid = f0.grid
    if f1.grid != grid:
        raise GridError("initial value and velocity live on different grids")
    live, l1, l2 = _grid_roots(grid, p)
    G1, G2 = g_functions(l1, l2, t)
    homogeneous = np.zeros(grid.shape, dtype=np.complex128)
    homogeneous[live] = np.asarray(G1) * f1.coeffs[live] + np.asarray(G2) * f0.coeffs[live]
    return SpectralField._wrap(grid, homogeneous) + duhamel_apply(forcing, t, p, times=times)
