"""
Pseudo-spectral time stepping of the nonlinear perturbation system

    u_t + u.grad u = nu d22 u - grad p + theta e2,   div u = 0
    theta_t + u.grad theta + u2 = eta d11 theta

State vectors are stacked coefficient arrays y of shape (3, n1, n2) in
(u1, u2, theta) order. Dissipation L = (-nu xi2^2, -nu xi2^2, -eta xi1^2)
is diagonal; the coupling and advection go into the explicit tendency N.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
import scipy.fft

from ..errors import CFLViolationError, GridError, InvalidInputError, NumericalInstabilityError
from ..models import DiagnosticsRecord, Params, SimConfig
from ..spectral import FrequencyGrid, SpectralField, VectorField, fft_workers
from .state import NonlinearState, clean

logger = logging.getLogger(__name__)

CFL_LIMIT = 0.5
GROWTH_FACTOR = 1e3
_FIELD_NAMES = ("u1", "u2", "theta")


def dissipation_symbol(grid: FrequencyGrid, p: Params) -> np.ndarray:
    lu = -p.nu * grid.xi2**2
    lt = -p.eta * grid.xi1**2
    return np.stack([lu, lu, lt])


def _physical(grid: FrequencyGrid, coeffs: np.ndarray) -> np.ndarray:
    return scipy.fft.ifft2(coeffs * (grid.n1 * grid.n2), workers=fft_workers()).real


def _spectral(grid: FrequencyGrid, values: np.ndarray) -> np.ndarray:
    return scipy.fft.fft2(values, workers=fft_workers()) / (grid.n1 * grid.n2)


def tendency(grid: FrequencyGrid, y: np.ndarray, *, nonlinear: bool = True) -> np.ndarray:
    """N(y) = (P(-u.grad u + theta e2), -u.grad theta - u2), dealiased and mean-free."""
    u1, u2, th = y
    k1 = 1j * grid.xi1_odd
    k2 = 1j * grid.xi2_odd
    fu1 = np.zeros_like(u1)
    fu2 = th.copy()
    fth = -u2
    if nonlinear:
        phys = _physical(
            grid,
            np.stack([u1, u2, k1 * u1, k2 * u1, k1 * u2, k2 * u2, k1 * th, k2 * th]),
        )
        U1, U2, d1u1, d2u1, d1u2, d2u2, d1th, d2th = phys
        adv = _spectral(
            grid,
            np.stack([U1 * d1u1 + U2 * d2u1, U1 * d1u2 + U2 * d2u2, U1 * d1th + U2 * d2th]),
        )
        fu1 = fu1 - adv[0]
        fu2 = fu2 - adv[1]
        fth = fth - adv[2]
    out = clean(grid, np.stack([fu1, fu2, fth]))
    finite = np.isfinite(out).reshape(3, -1).all(axis=1)
    if not finite.all():
        name = _FIELD_NAMES[int(np.argmin(finite))]
        raise NumericalInstabilityError(
            f"non-finite values in the {name} tendency", meta={"field": name}
        )
    return out


def nonlinear_tendency(
    s: NonlinearState, *, nonlinear: bool = True
) -> tuple[VectorField, SpectralField]:
    grid = s.grid
    out = tendency(grid, s.stacked(), nonlinear=nonlinear)
    return (
        VectorField(SpectralField._wrap(grid, out[0]), SpectralField._wrap(grid, out[1]), solenoidal=True),
        SpectralField._wrap(grid, out[2]),
    )


def max_velocity(grid: FrequencyGrid, y: np.ndarray) -> float:
    U1, U2 = _physical(grid, y[:2])
    return float(np.sqrt(U1**2 + U2**2).max(initial=0.0))


def cfl_number(grid: FrequencyGrid, y: np.ndarray, dt: float) -> tuple[float, float]:
    umax = max_velocity(grid, y)
    return dt * umax * grid.max_wavenumber(), umax


def check_cfl(grid: FrequencyGrid, y: np.ndarray, dt: float) -> float:
    cfl, umax = cfl_number(grid, y, dt)
    if cfl > CFL_LIMIT:
        suggested = 0.9 * CFL_LIMIT / (umax * grid.max_wavenumber())
        raise CFLViolationError(
            f"CFL number {cfl:.3f} exceeds {CFL_LIMIT}; try dt <= {suggested:.3e}",
            cfl=cfl,
            suggested_dt=suggested,
        )
    return cfl


class _Weights:
    """Per-mode weights for the norms recorded at every cadence tick."""

    def __init__(self, grid: FrequencyGrid) -> None:
        self.cw = grid.cellweight
        ksq = grid.ksq
        self.h2 = 1.0 + ksq + ksq**2
        self.xi1_sq = grid.xi1**2
        self.xi2_sq = grid.xi2**2
        self.ksq = ksq


def _dissipation_rates(
    w: _Weights, y: np.ndarray, dy: np.ndarray
) -> tuple[float, float, float, float]:
    """||d2 u||^2, ||d1 theta||^2 and their time derivatives given dy = dy/dt."""
    a = np.abs(y[0]) ** 2 + np.abs(y[1]) ** 2
    d2u = w.cw * float(np.sum(w.xi2_sq * a))
    d1t = w.cw * float(np.sum(w.xi1_sq * np.abs(y[2]) ** 2))
    da = np.real(np.conj(y[0]) * dy[0] + np.conj(y[1]) * dy[1])
    dd2u = 2.0 * w.cw * float(np.sum(w.xi2_sq * da))
    dd1t = 2.0 * w.cw * float(np.sum(w.xi1_sq * np.real(np.conj(y[2]) * dy[2])))
    return d2u, d1t, dd2u, dd1t


class _EnergyTracker:
    """Running E(t) over cadence records, trapezoid between records.

    Same combination as ``diagnostics.energy.energy_functional``.
    """

    def __init__(self, delta: float, p: Params) -> None:
        self.delta = delta
        self.p = p
        self.prev: DiagnosticsRecord | None = None
        self.running = 0.0
        self.integrals = 0.0
        self.E0 = 0.0

    def _rate(self, rec: DiagnosticsRecord) -> float:
        return (
            2.0 * self.p.nu * rec.d2u_h2_sq
            + 2.0 * self.p.eta * rec.d1theta_h2_sq
            + self.delta * rec.d1u2_l2_sq
        )

    def update(self, rec: DiagnosticsRecord) -> float:
        if self.prev is None:
            self.running = rec.h2_sq
            self.E0 = rec.h2_sq
        else:
            self.running = max(self.running, rec.h2_sq)
            self.integrals += 0.5 * (rec.t - self.prev.t) * (self._rate(self.prev) + self._rate(rec))
        self.prev = rec
        return self.running + self.integrals


@dataclass
class RunResult:
    records: list[DiagnosticsRecord]
    final: NonlinearState
    unstable: bool = False
    reason: str | None = None
    snapshots: list[NonlinearState] = field(default_factory=list)
    energies: list[float] = field(default_factory=list)

    @property
    def growth(self) -> float:
        """max E(t)/E(0) over the recorded ticks."""
        if not self.energies or self.energies[0] <= 0:
            return 0.0
        return max(self.energies) / self.energies[0]


class Simulation:
    """Single-writer stepper owning the state of one run."""

    def __init__(self, cfg: SimConfig, init: NonlinearState) -> None:
        grid = init.grid
        if (grid.n1, grid.n2, grid.L1, grid.L2) != (cfg.grid.n1, cfg.grid.n2, cfg.grid.L1, cfg.grid.L2):
            raise GridError(
                f"initial state grid {grid.shape} does not match the configured "
                f"{cfg.grid.n1}x{cfg.grid.n2} grid"
            )
        self.cfg = cfg
        self.grid = grid
        self.dt = cfg.dt
        self.L = dissipation_symbol(grid, cfg.params)
        self.E_half = np.exp(0.5 * self.dt * self.L)
        self.E_full = np.exp(self.dt * self.L)
        self.cn_plus = 1.0 + 0.5 * self.dt * self.L
        self.cn_minus = 1.0 - 0.5 * self.dt * self.L
        self._w = _Weights(grid)
        self.y = clean(grid, init.stacked())
        self.step_count = 0
        self.t0 = init.t
        self.int_d2u = 0.0
        self.int_d1theta = 0.0
        self._N = tendency(grid, self.y, nonlinear=cfg.nonlinear)
        self.cfl = check_cfl(grid, self.y, self.dt)

    @property
    def t(self) -> float:
        return self.t0 + self.step_count * self.dt

    @property
    def state(self) -> NonlinearState:
        return NonlinearState.from_stacked(self.grid, self.y, self.t)

    def _N_of(self, y: np.ndarray) -> np.ndarray:
        return tendency(self.grid, y, nonlinear=self.cfg.nonlinear)

    def _if_rk4(self, y: np.ndarray, k1: np.ndarray) -> np.ndarray:
        h, E, E2 = self.dt, self.E_half, self.E_full
        k2 = self._N_of(E * (y + 0.5 * h * k1))
        k3 = self._N_of(E * y + 0.5 * h * k2)
        k4 = self._N_of(E2 * y + h * E * k3)
        return E2 * y + (h / 6.0) * (E2 * k1 + 2.0 * E * (k2 + k3) + k4)

    def _imex_cn(self, y: np.ndarray, n0: np.ndarray) -> np.ndarray:
        h = self.dt
        base = self.cn_plus * y
        predictor = (base + h * n0) / self.cn_minus
        n1 = self._N_of(clean(self.grid, predictor))
        return (base + 0.5 * h * (n0 + n1)) / self.cn_minus

    def advance(self) -> NonlinearState:
        y0, n0 = self.y, self._N
        if self.cfg.scheme == "if-rk4":
            y1 = self._if_rk4(y0, n0)
        else:
            y1 = self._imex_cn(y0, n0)
        y1 = clean(self.grid, y1)
        n1 = self._N_of(y1)
        self.cfl = check_cfl(self.grid, y1, self.dt)

        # Endpoint-corrected trapezoid for the dissipation integrals.
        d0 = _dissipation_rates(self._w, y0, self.L * y0 + n0)
        d1 = _dissipation_rates(self._w, y1, self.L * y1 + n1)
        h = self.dt
        self.int_d2u += 0.5 * h * (d0[0] + d1[0]) + h * h / 12.0 * (d0[2] - d1[2])
        self.int_d1theta += 0.5 * h * (d0[1] + d1[1]) + h * h / 12.0 * (d0[3] - d1[3])

        self.y, self._N = y1, n1
        self.step_count += 1
        return self.state

    def record(self) -> DiagnosticsRecord:
        w, y = self._w, self.y
        a = np.abs(y[0]) ** 2 + np.abs(y[1]) ** 2
        th = np.abs(y[2]) ** 2
        omega = 1j * self.grid.xi1_odd * y[1] - 1j * self.grid.xi2_odd * y[0]
        om = np.abs(omega) ** 2
        cw = w.cw
        umax = max_velocity(self.grid, y)
        return DiagnosticsRecord(
            t=self.t,
            step=self.step_count,
            l2_sq=cw * float(np.sum(a + th)),
            h2_u_sq=cw * float(np.sum(w.h2 * a)),
            h2_theta_sq=cw * float(np.sum(w.h2 * th)),
            d2u_l2_sq=cw * float(np.sum(w.xi2_sq * a)),
            d1theta_l2_sq=cw * float(np.sum(w.xi1_sq * th)),
            d2u_h2_sq=cw * float(np.sum(w.h2 * w.xi2_sq * a)),
            d1theta_h2_sq=cw * float(np.sum(w.h2 * w.xi1_sq * th)),
            d1u2_l2_sq=cw * float(np.sum(w.xi1_sq * np.abs(y[1]) ** 2)),
            int_d2u_l2=self.int_d2u,
            int_d1theta_l2=self.int_d1theta,
            omega_l2=math.sqrt(cw * float(np.sum(om))),
            grad_omega_l2=math.sqrt(cw * float(np.sum(w.ksq * om))),
            max_u=umax,
            cfl=self.dt * umax * self.grid.max_wavenumber(),
        )


def step(s: NonlinearState, cfg: SimConfig) -> NonlinearState:
    """One time step of ``cfg.scheme`` from ``s``."""
    return Simulation(cfg, s).advance()


def iter_run(
    cfg: SimConfig, init: NonlinearState
) -> Iterator[tuple[NonlinearState, DiagnosticsRecord]]:
    """Yield (state, record) at t = 0 and every ``cfg.cadence`` steps, and at the final step."""
    sim = Simulation(cfg, init)
    n = cfg.n_steps
    yield sim.state, sim.record()
    for k in range(1, n + 1):
        sim.advance()
        if k % cfg.cadence == 0 or k == n:
            yield sim.state, sim.record()


def run(
    cfg: SimConfig,
    init: NonlinearState,
    *,
    detect_growth: bool = True,
    keep_states: bool = False,
    keep_every: int = 1,
) -> RunResult:
    """Advance to ``cfg.T`` collecting records.

    With ``keep_states`` the state at every ``keep_every``-th record is kept
    in ``RunResult.snapshots``.

    E(t) is accumulated at every record. With ``detect_growth`` a run whose
    E(t) exceeds GROWTH_FACTOR times E(0), or which produces non-finite
    values, stops early and is flagged unstable instead of raising.
    """
    if keep_every < 1:
        raise InvalidInputError(f"keep_every must be >= 1, got {keep_every}")
    records: list[DiagnosticsRecord] = []
    states: list[NonlinearState] = []
    energies: list[float] = []
    tracker = _EnergyTracker(cfg.delta, cfg.params)
    final = init
    unstable = False
    reason: str | None = None
    it = iter_run(cfg, init)
    try:
        for state, rec in it:
            records.append(rec)
            energies.append(tracker.update(rec))
            final = state
            if keep_states and (len(records) - 1) % keep_every == 0:
                states.append(state)
            if not detect_growth:
                continue
            E, base = energies[-1], tracker.E0
            if not math.isfinite(E) or (base > 0 and E > GROWTH_FACTOR * base):
                unstable = True
                reason = f"E(t) grew by {E / base if base else math.inf:.3g} at t={rec.t:g}"
                logger.warning("instability observed: %s", reason)
                break
    except NumericalInstabilityError as exc:
        if not detect_growth:
            raise
        unstable = True
        reason = str(exc)
        logger.warning("instability observed: %s", reason)
    finally:
        it.close()
    return RunResult(
        records=records,
        final=final,
        unstable=unstable,
        reason=reason,
        snapshots=states,
        energies=energies,
    )


@dataclass(frozen=True)
class TwinReport:
    dts: list[float]
    differences: list[float]
    orders: list[float]

    @property
    def order(self) -> float:
        return min(self.orders) if self.orders else math.nan

    @property
    def converging(self) -> bool:
        """Twin trajectories approach each other as dt shrinks."""
        return all(b < a for a, b in zip(self.differences, self.differences[1:]))


def twin_convergence(
    cfg: SimConfig, init: NonlinearState, dts: Sequence[float]
) -> TwinReport:
    """Self-convergence of the final state over successively refined dt.

    Differences are L2 distances between final states at neighbouring dt;
    orders are log(d_k / d_{k+1}) / log(dt_k / dt_{k+1}).
    """
    levels = sorted((float(d) for d in dts), reverse=True)
    if len(levels) < 3:
        raise InvalidInputError("twin convergence needs at least three time steps")
    finals: list[np.ndarray] = []
    for dt in levels:
        n = cfg.T / dt
        if abs(n - round(n)) > 1e-9 * max(n, 1.0):
            raise InvalidInputError(f"dt={dt} does not divide T={cfg.T}")
        sub = cfg.model_copy(update={"dt": dt, "cadence": max(1, int(round(n)))})
        result = run(sub, init, detect_growth=False)
        finals.append(result.final.stacked())
    cw = init.grid.cellweight
    diffs = [
        math.sqrt(cw * float(np.sum(np.abs(a - b) ** 2))) for a, b in zip(finals, finals[1:])
    ]
    orders = [
        math.log(d0 / d1) / math.log(levels[k] / levels[k + 1]) if d0 > 0 and d1 > 0 else math.nan
        for k, (d0, d1) in enumerate(zip(diffs, diffs[1:]))
    ]
    logger.debug("twin convergence dts=%s diffs=%s orders=%s", levels, diffs, orders)
    return TwinReport(dts=levels, differences=diffs, orders=orders)
