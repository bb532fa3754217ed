"""
Exact linear evolution, the per-mode RK4 oracle and the wave-form residual.

Linearized system on the torus, mode by mode:

    u1' = -nu xi2^2 u1 - (xi1 xi2 / |xi|^2) theta
    u2' = -nu xi2^2 u2 + (xi1^2 / |xi|^2) theta
    theta' = -eta xi1^2 theta - u2

Only resolved modes evolve. The origin is held constant and the Nyquist
lines are set to zero for t > 0.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import GridError, InvalidInputError, SnapshotSpacingError
from ..kernels.symbols import kernel_arrays, symbol_coefficients
from ..models import Params
from ..spectral import (
    FrequencyGrid,
    SpectralField,
    VectorField,
    curl,
    divergence_ratio,
    l2_norm,
)

logger = logging.getLogger(__name__)

WaveField = Literal["u1", "u2", "theta", "omega"]

DIVERGENCE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LinearState:
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
    def zeros(cls, grid: FrequencyGrid, t: float = 0.0) -> "LinearState":
        return cls(VectorField.zeros(grid), SpectralField.zeros(grid), t)

    @classmethod
    def from_arrays(
        cls, grid: FrequencyGrid, u1: np.ndarray, u2: np.ndarray, theta: np.ndarray, t: float = 0.0
    ) -> "LinearState":
        return cls(
            VectorField(SpectralField(grid, u1), SpectralField(grid, u2)),
            SpectralField(grid, theta),
            t,
        )

    def fields(self) -> dict[str, SpectralField]:
        return {"u1": self.u.u1, "u2": self.u.u2, "theta": self.theta}

    def stacked(self) -> np.ndarray:
        """Coefficients as an array of shape (3, n1, n2) in (u1, u2, theta) order."""
        return np.stack([self.u.u1.coeffs, self.u.u2.coeffs, self.theta.coeffs])

    def component(self, name: WaveField) -> SpectralField:
        if name == "omega":
            return curl(self.u)
        try:
            return self.fields()[name]
        except KeyError:
            raise InvalidInputError(
                f"unknown field {name!r}; expected u1, u2, theta or omega"
            ) from None


def max_relative_error(a: LinearState, b: LinearState, reference: LinearState) -> float:
    """Largest mode-wise difference, relative to the largest coefficient of ``reference``."""
    scale = float(np.abs(reference.stacked()).max(initial=0.0))
    diff = float(np.abs(a.stacked() - b.stacked()).max(initial=0.0))
    if scale == 0.0:
        return diff
    return diff / scale


def _check_divergence_free(s: LinearState) -> None:
    ratio = divergence_ratio(s.u)
    if ratio > DIVERGENCE_TOL:
        raise InvalidInputError(
            f"initial velocity is not divergence-free (ratio {ratio:.3e})",
            meta={"divergence_ratio": ratio},
        )


def _kernel_rows(
    grid: FrequencyGrid, rows: np.ndarray, t: float, p: Params
) -> list[np.ndarray]:
    mask = grid.resolved_mask[rows]
    out = [np.zeros(mask.shape) for _ in range(5)]
    if mask.any():
        k = kernel_arrays(grid.xi1[rows][mask], grid.xi2[rows][mask], t, p)
        for arr, vals in zip(out, (k.K1, k.K2, k.K3, k.K4, k.K5)):
            arr[mask] = np.real(vals)
    return out


def grid_kernels(
    grid: FrequencyGrid, t: float, p: Params, *, workers: int | None = None
) -> tuple[np.ndarray, ...]:
    """Real K1..K5 on every grid mode (identity at the origin, zero on Nyquist lines).

    With ``workers`` > 1 the rows are split across a thread pool; every mode
    is computed independently so the result does not depend on the split.
    """
    if t < 0:
        raise InvalidInputError(f"time must be >= 0, got {t}")
    width = max(1, int(workers or 1))
    chunks = [c for c in np.array_split(np.arange(grid.n1), min(width, grid.n1)) if c.size]
    if width == 1:
        parts = [_kernel_rows(grid, chunks[0], t, p)]
    else:
        with ThreadPoolExecutor(max_workers=width) as pool:
            parts = list(pool.map(lambda rows: _kernel_rows(grid, rows, t, p), chunks))
    kernels = [np.concatenate([part[i] for part in parts], axis=0) for i in range(5)]
    kernels[0][0, 0] = 1.0
    kernels[4][0, 0] = 1.0
    for arr in kernels:
        arr.setflags(write=False)
    return tuple(kernels)


def propagate_exact(
    s0: LinearState, t: float, p: Params, *, workers: int | None = None
) -> LinearState:
    if t < 0:
        raise InvalidInputError(f"propagation time must be >= 0, got {t}")
    _check_divergence_free(s0)
    if t == 0:
        return LinearState(s0.u, s0.theta, s0.t)
    grid = s0.grid
    K1, K2, K3, K4, K5 = grid_kernels(grid, t, p, workers=workers)
    u10, u20, th0 = s0.u.u1.coeffs, s0.u.u2.coeffs, s0.theta.coeffs
    u = VectorField(
        SpectralField._wrap(grid, K1 * u10 + K2 * th0),
        SpectralField._wrap(grid, K1 * u20 + K3 * th0),
        solenoidal=True,
    )
    theta = SpectralField._wrap(grid, K4 * u20 + K5 * th0)
    return LinearState(u, theta, s0.t + t)


def _mode_coefficients(
    xi1: np.ndarray, xi2: np.ndarray, p: Params
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    ksq = xi1**2 + xi2**2
    inv = np.divide(1.0, ksq, out=np.zeros_like(ksq), where=ksq > 0)
    return p.nu * xi2**2, p.eta * xi1**2, xi1 * xi2 * inv, xi1**2 * inv


def time_derivative(s: LinearState, p: Params) -> LinearState:
    """Exact d/dt of the linear system at ``s`` (zero off the resolved modes)."""
    grid = s.grid
    nu_sq, eta_sq, c12, c11 = _mode_coefficients(grid.xi1, grid.xi2, p)
    mask = grid.resolved_mask
    u1, u2, th = s.u.u1.coeffs, s.u.u2.coeffs, s.theta.coeffs
    du1 = np.where(mask, -nu_sq * u1 - c12 * th, 0.0)
    du2 = np.where(mask, -nu_sq * u2 + c11 * th, 0.0)
    dth = np.where(mask, -eta_sq * th - u2, 0.0)
    return LinearState(
        VectorField(SpectralField._wrap(grid, du1), SpectralField._wrap(grid, du2), solenoidal=True),
        SpectralField._wrap(grid, dth),
        s.t,
    )


def oracle_step_size(damping_max: float, t: float) -> float:
    """Default RK4 step: half the stability limit, at most t/200 and 1e-2."""
    limit = 0.5 / damping_max if damping_max > 0 else math.inf
    return min(limit, t / 200.0, 1e-2)


def ode_oracle(
    s0: LinearState, t: float, p: Params, dt: float | None = None
) -> LinearState:
    """Classical RK4 on the 3x3 per-mode system, vectorised over the active modes.

    Only resolved modes that carry data are integrated; the step is shrunk
    so that an integer number of steps lands exactly on ``t``.
    """
    if t < 0:
        raise InvalidInputError(f"oracle time must be >= 0, got {t}")
    if dt is not None and dt <= 0:
        raise InvalidInputError(f"oracle step must be > 0, got {dt}")
    grid = s0.grid
    data = s0.stacked()
    if t == 0:
        return LinearState.from_arrays(grid, data[0], data[1], data[2], s0.t)

    active = grid.resolved_mask & np.any(data != 0, axis=0)
    out = np.zeros_like(data)
    out[:, 0, 0] = data[:, 0, 0]
    if active.any():
        xi1, xi2 = grid.xi1[active], grid.xi2[active]
        nu_sq, eta_sq, c12, c11 = _mode_coefficients(xi1, xi2, p)
        damping_max = float(np.max(nu_sq + eta_sq))
        step = oracle_step_size(damping_max, t) if dt is None else dt
        n = max(1, math.ceil(t / step - 1e-12))
        h = t / n
        if h * damping_max > 1.0:
            logger.warning(
                "RK4 oracle step %.3e exceeds the stability bound 1/%.3e", h, damping_max
            )

        def rhs(y: np.ndarray) -> np.ndarray:
            return np.stack(
                [
                    -nu_sq * y[0] - c12 * y[2],
                    -nu_sq * y[1] + c11 * y[2],
                    -eta_sq * y[2] - y[1],
                ]
            )

        y = data[:, active].copy()
        for _ in range(n):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[:, active] = y
        logger.debug("oracle: %d modes, %d steps of %.3e", int(active.sum()), n, h)
    return LinearState.from_arrays(grid, out[0], out[1], out[2], s0.t + t)


def heat_only_propagate(s0: LinearState, t: float, p: Params) -> LinearState:
    """Evolution with the buoyancy coupling removed: pure anisotropic heat flow."""
    if t < 0:
        raise InvalidInputError(f"propagation time must be >= 0, got {t}")
    grid = s0.grid
    if t == 0:
        return LinearState(s0.u, s0.theta, s0.t)
    mask = grid.resolved_mask
    decay_u = np.where(mask, np.exp(-p.nu * grid.xi2**2 * t), 0.0)
    decay_th = np.where(mask, np.exp(-p.eta * grid.xi1**2 * t), 0.0)
    decay_u[0, 0] = decay_th[0, 0] = 1.0
    return LinearState(
        VectorField(s0.u.u1.multiply(decay_u), s0.u.u2.multiply(decay_u), solenoidal=s0.u.solenoidal),
        s0.theta.multiply(decay_th),
        s0.t + t,
    )


def trajectory(
    s0: LinearState, times: Sequence[float], p: Params, *, workers: int | None = None
) -> list[LinearState]:
    """Exact states at the given offsets from ``s0.t``."""
    return [propagate_exact(s0, float(t), p, workers=workers) for t in times]


def uniform_spacing(times: Sequence[float], *, rtol: float = 1e-9) -> float:
    """Common spacing of ``times``; SnapshotSpacingError when absent."""
    ts = np.asarray(times, dtype=float)
    if ts.size < 3:
        raise SnapshotSpacingError(f"need at least 3 snapshots, got {ts.size}")
    gaps = np.diff(ts)
    h = float(gaps.mean())
    if h <= 0 or np.any(np.abs(gaps - h) > rtol * max(h, 1e-300) + 1e-14):
        raise SnapshotSpacingError(
            "snapshots are not uniformly spaced in time",
            meta={"min_gap": float(gaps.min()), "max_gap": float(gaps.max())},
        )
    return h


def wave_residuals(
    snapshots: Sequence[LinearState], p: Params, field: WaveField = "theta"
) -> np.ndarray:
    """L2 norm of f'' + p f' + q f at every interior snapshot (central differences in time)."""
    h = uniform_spacing([s.t for s in snapshots])
    grid = snapshots[0].grid
    for s in snapshots[1:]:
        if s.grid != grid:
            raise GridError("snapshots live on different grids")
    damping, stiffness = symbol_coefficients(grid.xi1, grid.xi2, p)
    mask = grid.resolved_mask
    series = [s.component(field).coeffs for s in snapshots]
    out = np.empty(len(series) - 2)
    for k in range(1, len(series) - 1):
        prev, cur, nxt = series[k - 1], series[k], series[k + 1]
        f_tt = (nxt - 2.0 * cur + prev) / h**2
        f_t = (nxt - prev) / (2.0 * h)
        residual = np.where(mask, f_tt + damping * f_t + stiffness * cur, 0.0)
        out[k - 1] = l2_norm(SpectralField._wrap(grid, residual.astype(np.complex128)))
    return out


def wave_residual(
    snapshots: Sequence[LinearState], p: Params, field: WaveField = "theta"
) -> float:
    """Largest interior wave-equation residual; zero for the zero trajectory."""
    return float(wave_residuals(snapshots, p, field).max(initial=0.0))
