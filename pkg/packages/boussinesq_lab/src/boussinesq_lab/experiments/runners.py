"""
The canonical experiments. Each runner turns a LabConfig into report tables,
a dict of named acceptance checks and a few headline numbers; ``execute``
times it, writes the reports and enforces the checks when asked.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np

from ..config import LabConfig
from ..continuum import (
    ClosedFormSpectrum,
    ContinuumInit,
    DecayCase,
    closed_form_norm,
    decay_report,
    divergence_free_pair,
    norm_by_quadrature,
)
from ..diagnostics import (
    CutoffFilter,
    c0_constant,
    cancellation_I1,
    cancellation_J1,
    default_window,
    dissipation_residuals,
    energy_balance,
    energy_functional,
    filtered_h1_sq,
    fit_decay_rate,
    integral_growth_rates,
    lower_bound_holds,
    lyapunov_series,
    max_growth,
    max_triple_ratio,
    seed_spread,
)
from ..errors import AcceptanceError, InvalidInputError
from ..kernels import (
    fit_envelope_constants,
    kernel_table,
    refine_values,
    root_bounds_hold,
    symbol_coefficients,
    validate_envelope,
    vieta_residuals,
)
from ..linear import (
    LinearState,
    max_relative_error,
    ode_oracle,
    propagate_exact,
    trajectory,
    wave_residual,
    wave_solution,
)
from ..models import Params
from ..nonlinear import (
    NonlinearState,
    combined_h2_norm,
    random_band_field,
    random_solenoidal,
    run,
    twin_convergence,
    vorticity_diagnostics,
    vorticity_residual_fd,
)
from ..spectral import FrequencyGrid, make_grid
from .reports import RunSummary, SnapshotSet, Table, emit_report, get_schema
from .seeding import stream

logger = logging.getLogger(__name__)

EXPERIMENTS = (
    "linear-verify",
    "kernel-bounds",
    "decay-rates",
    "exp-decay",
    "stability-sweep",
    "energy-balance",
)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    config: LabConfig
    out_dir: Path
    seed: int = 0
    threads: int = 1
    check: bool = False
    # overrides [snapshots] every when set
    snapshot_every: int | None = None

    def __post_init__(self) -> None:
        if self.name not in EXPERIMENTS:
            raise InvalidInputError(
                f"unknown experiment {self.name!r}; expected one of {', '.join(EXPERIMENTS)}"
            )
        if self.snapshot_every is not None and self.snapshot_every < 0:
            raise InvalidInputError(f"snapshot_every must be >= 0, got {self.snapshot_every}")

    @property
    def snapshot_stride(self) -> int:
        return self.config.snapshots.every if self.snapshot_every is None else self.snapshot_every


@dataclass
class ExperimentOutcome:
    tables: list[Table]
    checks: dict[str, bool] = field(default_factory=dict)
    headline: dict[str, Any] = field(default_factory=dict)
    E0: float | None = None
    snapshots: list[Any] = field(default_factory=list)


def _map(fn: Callable[[T], R], items: Iterable[T], threads: int) -> list[R]:
    """Ordered map, on a thread pool when ``threads`` > 1."""
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _order(errors: Sequence[float], steps: Sequence[float]) -> float:
    """Smallest observed convergence order between neighbouring step sizes."""
    orders = [
        math.log(errors[k] / errors[k + 1]) / math.log(steps[k] / steps[k + 1])
        for k in range(len(errors) - 1)
        if errors[k] > 0 and errors[k + 1] > 0
    ]
    return min(orders) if orders else math.nan


def _grid(cfg: LabConfig, n: int | None = None) -> FrequencyGrid:
    g = cfg.grid
    return make_grid(n or g.n1, n or g.n2, g.L1, g.L2)


# linear-verify


def run_linear_verify(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.linear_verify
    grid = _grid(cfg, sec.n)
    s0 = random_solenoidal(grid, 1.0, stream(spec.seed, "linear-verify/init"), sec.band).to_linear()

    cells = [(nu, eta, t) for nu in sec.nus for eta in sec.etas for t in sec.times]

    def compare(cell: tuple[float, float, float]) -> dict[str, Any]:
        nu, eta, t = cell
        p = Params(nu=nu, eta=eta)
        err = max_relative_error(propagate_exact(s0, t, p), ode_oracle(s0, t, p), s0)
        return {"nu": nu, "eta": eta, "t": t, "max_rel_error": err}

    rows = _map(compare, cells, spec.threads)
    worst = max((r["max_rel_error"] for r in rows), default=0.0)

    p = cfg.physical
    t1, t2 = sec.semigroup_times
    direct = propagate_exact(s0, t1 + t2, p)
    composed = propagate_exact(propagate_exact(s0, t1, p), t2, p)
    semigroup = max_relative_error(direct, composed, s0)

    wave_grid = make_grid(sec.wave_n, sec.wave_n, cfg.grid.L1, cfg.grid.L2)
    w0 = random_solenoidal(wave_grid, 1.0, stream(spec.seed, "linear-verify/wave"), 2).to_linear()
    residuals = []
    steps = [sec.wave_dt, 0.5 * sec.wave_dt]
    for h in steps:
        snaps = trajectory(w0, [0.5 + k * h for k in range(5)], p)
        residuals.append(wave_residual(snaps, p, "theta"))
    wave_order = _order(residuals, steps)

    f0 = random_band_field(wave_grid, stream(spec.seed, "linear-verify/duhamel"), 2)
    # f = e^{-t} f0 solves f'' + p f' + q f = (1 - p + q) e^{-t} f0 with f'(0) = -f0
    damping, stiffness = symbol_coefficients(wave_grid.xi1, wave_grid.xi2, p)
    t_end = 1.0
    mesh = np.linspace(0.0, t_end, sec.duhamel_samples)
    source = f0.multiply(1.0 - damping + stiffness)
    forcing = [source * math.exp(-tau) for tau in mesh]
    solved = wave_solution(f0, -f0, forcing, t_end, p, times=mesh)
    exact = f0.multiply(np.where(wave_grid.nyquist_mask, 0.0, math.exp(-t_end)))
    scale = max(f0.max_abs(), 1e-300)
    duhamel_err = (solved - exact).max_abs() / scale

    stride = spec.snapshot_stride
    snapshots = trajectory(s0, [0.0, *sorted(sec.times)], p)[::stride] if stride else []

    return ExperimentOutcome(
        tables=[Table(get_schema("linear_verify"), rows)],
        checks={
            "propagator_vs_oracle": worst <= sec.tolerance,
            "semigroup": semigroup <= 1e-10,
            "wave_residual_order": wave_order >= 1.8,
            "duhamel": duhamel_err <= sec.duhamel_tolerance,
        },
        headline={
            "max_rel_error": worst,
            "semigroup_error": semigroup,
            "wave_residual_order": wave_order,
            "duhamel_error": duhamel_err,
        },
        E0=_energy(s0),
        snapshots=snapshots,
    )


def _energy(s: LinearState) -> float:
    return combined_h2_norm(NonlinearState.from_linear(s)) ** 2


# kernel-bounds


def run_kernel_bounds(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.kernel_bounds
    rng = stream(spec.seed, "kernel-bounds/samples")
    xi = rng.uniform(-sec.xi_max, sec.xi_max, size=(sec.samples, 2))
    lo, hi = sec.param_range
    params = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(sec.samples, 2)))

    vieta_worst = 0.0
    bounds_ok = True
    for (x1, x2), (nu, eta) in zip(xi, params):
        p = Params(nu=float(nu), eta=float(eta))
        sum_res, prod_res = vieta_residuals(x1, x2, p)
        vieta_worst = max(vieta_worst, float(sum_res), float(prod_res))
        bounds_ok &= bool(root_bounds_hold(x1, x2, p))

    p = cfg.physical
    xi_lattice = np.linspace(0.0, sec.lattice_xi_max, sec.lattice_xi)
    t_lattice = np.linspace(0.0, sec.lattice_t_max, sec.lattice_t)
    fit = fit_envelope_constants(xi_lattice, xi_lattice, t_lattice, p, safety=sec.safety, c_max=sec.c_max)
    validation = validate_envelope(
        fit,
        refine_values(xi_lattice, sec.refine),
        refine_values(xi_lattice, sec.refine),
        refine_values(t_lattice, sec.refine),
        p,
    )
    envelope_row = {
        "nu": p.nu,
        "eta": p.eta,
        "C": fit.C,
        "c0": fit.c0,
        "feasible": fit.feasible,
        "violations": validation.violations,
        "max_ratio": validation.max_ratio,
    }
    table_rows = kernel_table(sec.table_xi, sec.table_t, p)
    return ExperimentOutcome(
        tables=[
            Table(get_schema("kernel_envelope"), [envelope_row]),
            Table(get_schema("kernel_table"), table_rows, suffix="table"),
        ],
        checks={
            "vieta": vieta_worst <= sec.vieta_tolerance,
            "root_bounds": bounds_ok,
            "envelope_C": fit.feasible and fit.C <= sec.c_max,
            "envelope_c0": fit.c0 >= sec.c0_min,
            "envelope_validation": validation.holds,
        },
        headline={
            "vieta_max_residual": vieta_worst,
            "C": fit.C,
            "c0": fit.c0,
            "per_kernel": fit.per_kernel,
            "validation_points": validation.points,
            "validation_max_ratio": validation.max_ratio,
        },
    )


# decay-rates


def decay_cases(cfg: LabConfig) -> list[DecayCase]:
    sec = cfg.decay_rates
    theta0 = ClosedFormSpectrum(kind="xi1sq_weighted_gaussian", width=sec.width, amplitude=sec.amplitude)
    return [
        DecayCase(name="theta-xi1sq", component="theta", s=sec.s, sigma=sec.sigma, init=ContinuumInit(theta=theta0)),
        DecayCase(
            name="u2-pair",
            component="u2",
            s=sec.s,
            sigma=sec.sigma,
            init=divergence_free_pair(sec.width, sec.amplitude),
        ),
    ]


def run_decay_rates(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.decay_rates
    p = cfg.physical
    times = np.geomspace(sec.t_min, sec.t_max, sec.n_times)
    rows: list[dict[str, Any]] = []
    checks: dict[str, bool] = {}
    headline: dict[str, Any] = {}
    for case in decay_cases(cfg):
        report = decay_report(
            case, times, p, rtol=sec.rtol, max_panels=sec.max_panels, workers=spec.threads
        )
        rows.extend(report.rows())
        checks[f"{case.name}:slope"] = report.slope <= sec.slope_max
        checks[f"{case.name}:envelope"] = report.holds
        checks[f"{case.name}:converged"] = report.converged
        headline[case.name] = {
            "slope": report.slope,
            "r2": report.r2,
            "predicted_exponent": report.predicted_exponent,
            "dominant_exponent": report.dominant_exponent,
            "flags": report.flags,
        }

    theta0 = ClosedFormSpectrum(kind="gaussian", width=sec.width, amplitude=sec.amplitude)
    near_zero = norm_by_quadrature("theta", ContinuumInit(theta=theta0), 0.0, 1e-9, p, rtol=sec.rtol).value
    exact = closed_form_norm(theta0)
    start_err = abs(near_zero - exact) / exact
    checks["initial_limit"] = start_err <= 1e-4
    headline["initial_limit_error"] = start_err
    return ExperimentOutcome(
        tables=[Table(get_schema("decay_rates"), rows)],
        checks=checks,
        headline=headline,
        E0=closed_form_norm(decay_cases(cfg)[0].init.theta) ** 2,
    )


# exp-decay


def run_exp_decay(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.exp_decay
    sim = cfg.sim_config(seed=spec.seed)
    p = sim.params
    filt = CutoffFilter(a1=sim.a1, a2=sim.a2)
    lam = sim.lyap_lambda
    C0 = c0_constant(p, filt.a1, filt.a2, lam)

    grid = _grid(cfg, sec.n)
    s0 = random_solenoidal(grid, sec.epsilon, stream(spec.seed, "exp-decay/init"), sec.band).to_linear()
    times = np.linspace(0.0, sec.T, sec.samples)
    states = trajectory(s0, times, p, workers=spec.threads)

    reports_u = lyapunov_series(states, p, filt, lam, field="u")
    reports_theta = lyapunov_series(states, p, filt, lam, field="theta")
    comparison = all(
        r.B >= C0 * r.A - 1e-14 * max(r.A, 1e-300) for r in reports_u + reports_theta
    )
    lower = all(lower_bound_holds(s, p, filt, lam) for s in states[:: max(1, len(states) // 20)])

    h1 = np.array([filtered_h1_sq(s, filt) for s in states])
    fit = fit_decay_rate(times, h1, window=default_window(times), mode="exponential")
    rate = -fit.slope

    t_mid = 0.5 * sec.T
    steps = sorted(sec.residual_dts, reverse=True)
    residuals = []
    for h in steps:
        trio = trajectory(s0, [t_mid - h, t_mid, t_mid + h], p)
        series = lyapunov_series(trio, p, filt, lam, field="u")
        residuals.append(float(dissipation_residuals(series)[0]) / max(2.0 * series[1].B, 1e-300))
    order = _order(residuals, steps)

    rows = [r.as_row() for r in reports_u] + [r.as_row() for r in reports_theta]
    return ExperimentOutcome(
        tables=[Table(get_schema("lyapunov"), rows)],
        checks={
            "B_ge_C0_A": comparison,
            "A_lower_bound": lower,
            "dissipation_residual_order": order >= sec.order_min,
            "decay_rate": rate >= sec.rate_fraction * C0,
        },
        headline={
            "lambda": lam,
            "C0": C0,
            "fitted_rate": rate,
            "fit_r2": fit.r2,
            "residual_order": order,
            "residuals": residuals,
        },
        E0=_energy(s0),
    )


# stability-sweep


def run_stability_sweep(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.stability_sweep
    grid = _grid(cfg)
    cells = [(eps, k) for eps in sec.epsilons for k in range(sec.seeds)]

    def one(cell: tuple[float, int]) -> tuple[dict[str, Any], float]:
        eps, k = cell
        sim = cfg.sim_config(seed=spec.seed, T=sec.T)
        init = random_solenoidal(grid, eps, stream(spec.seed, f"stability-sweep/{eps!r}/{k}"), sec.band)
        result = run(sim, init)
        reports = energy_functional(result.records, sim.delta, sim.params)
        growth = max_growth(reports)
        rates = integral_growth_rates(reports)
        quarter = max(1, len(rates) // 4)
        rate_decays = bool(len(rates) >= 2 and rates[-quarter:].mean() < rates[:quarter].mean())
        if result.unstable:
            verdict = "unstable"
        elif growth <= sec.growth_bound:
            verdict = "bounded"
        else:
            verdict = "growth"
        row = {
            "epsilon": eps,
            "seed": k,
            "nu": sim.params.nu,
            "eta": sim.params.eta,
            "max_ratio": growth,
            "int_d1u2_l2": reports[-1].int_d1u2_l2 if reports else 0.0,
            "rate_decays": rate_decays,
            "verdict": verdict,
        }
        return row, reports[0].E0 if reports else 0.0

    results = _map(one, cells, spec.threads)
    rows = [r for r, _ in results]
    return ExperimentOutcome(
        tables=[Table(get_schema("stability_sweep"), rows)],
        checks={
            "bounded": all(r["verdict"] == "bounded" for r in rows),
            "integral_rate_decays": all(r["rate_decays"] for r in rows),
        },
        headline={
            "max_ratio": max((r["max_ratio"] for r in rows), default=0.0),
            "cells": len(rows),
            "E0_by_cell": [e for _, e in results],
        },
        E0=results[0][1] if results else None,
    )


# energy-balance


def run_energy_balance(spec: ExperimentSpec) -> ExperimentOutcome:
    cfg, sec = spec.config, spec.config.energy_balance
    sim = cfg.sim_config(seed=spec.seed, T=sec.T)
    p = sim.params
    grid = _grid(cfg)
    init = random_solenoidal(grid, sec.epsilon, stream(spec.seed, "energy-balance/init"), sec.band)
    stride = spec.snapshot_stride
    result = run(sim, init, detect_growth=False, keep_states=stride > 0, keep_every=max(stride, 1))
    drift = energy_balance(result.records, p)
    worst_drift = float(np.max(np.abs(drift))) if drift.size else 0.0
    balance_rows = [
        {
            "t": r.t,
            "l2_sq": r.l2_sq,
            "int_d2u_l2": r.int_d2u_l2,
            "int_d1theta_l2": r.int_d1theta_l2,
            "drift": float(d),
        }
        for r, d in zip(result.records, drift)
    ]
    functional = energy_functional(result.records, sim.delta, p)

    cgrid = make_grid(sec.cancellation_n, sec.cancellation_n)
    crng = stream(spec.seed, "energy-balance/cancellations")
    worst_cancel = 0.0
    for _ in range(sec.cancellation_samples):
        s = random_solenoidal(cgrid, 1.0, crng, max(1, sec.cancellation_n // 4))
        worst_cancel = max(
            worst_cancel,
            cancellation_I1(s.u, s.theta).relative,
            cancellation_J1(s.u, s.theta).relative,
        )

    ogrid = make_grid(sec.order_n, sec.order_n)
    oinit = random_solenoidal(ogrid, 1.0, stream(spec.seed, "energy-balance/order"), 3)
    ocfg = sim.model_copy(
        update={"grid": sim.grid.model_copy(update={"n1": sec.order_n, "n2": sec.order_n, "L1": 1.0, "L2": 1.0}),
                "T": sec.order_T, "scheme": "if-rk4"}
    )
    twin = twin_convergence(ocfg, oinit, sec.order_dts)

    vort = vorticity_diagnostics(result.final, p, nonlinear=sim.nonlinear)
    fd_steps = sorted(sec.vorticity_dts, reverse=True)
    fd_residuals = []
    for h in fd_steps:
        short = ocfg.model_copy(update={"dt": h, "T": 2 * h, "cadence": 1})
        snaps = run(short, oinit, detect_growth=False, keep_states=True).snapshots
        fd_residuals.append(vorticity_residual_fd(snaps[0], snaps[1], snaps[2], p, nonlinear=sim.nonlinear))
    fd_order = _order(fd_residuals, fd_steps)

    tgrid = make_grid(sec.triple_n, sec.triple_n)
    triple_maxima = _map(
        lambda k: max_triple_ratio(
            tgrid, stream(spec.seed, f"energy-balance/triple/{k}"), sec.triple_samples, max(1, sec.triple_n // 3)
        ),
        range(sec.triple_seeds),
        spec.threads,
    )
    spread = seed_spread(triple_maxima)
    return ExperimentOutcome(
        tables=[
            Table(get_schema("energy_balance"), balance_rows),
            Table(get_schema("energy"), [r.as_row() for r in functional], suffix="functional"),
        ],
        checks={
            "energy_identity": worst_drift <= sec.drift_tolerance,
            "cancellations": worst_cancel <= sec.cancellation_tolerance,
            "scheme_order": twin.order >= sec.order_min,
            "vorticity_residual": vort.relative_residual <= 1e-8,
            "vorticity_fd_order": fd_order >= 1.8,
            "triple_stable": spread <= sec.triple_spread,
        },
        headline={
            "max_drift": worst_drift,
            "max_cancellation": worst_cancel,
            "scheme_order": twin.order,
            "twin_differences": twin.differences,
            "vorticity_relative_residual": vort.relative_residual,
            "vorticity_fd_order": fd_order,
            "triple_product_max_ratio": max(triple_maxima),
            "triple_product_seed_maxima": triple_maxima,
            "triple_product_spread": spread,
            "max_energy_ratio": max_growth(functional),
        },
        E0=result.records[0].h2_sq if result.records else None,
        snapshots=result.snapshots,
    )


RUNNERS: dict[str, Callable[[ExperimentSpec], ExperimentOutcome]] = {
    "linear-verify": run_linear_verify,
    "kernel-bounds": run_kernel_bounds,
    "decay-rates": run_decay_rates,
    "exp-decay": run_exp_decay,
    "stability-sweep": run_stability_sweep,
    "energy-balance": run_energy_balance,
}


def execute(spec: ExperimentSpec) -> tuple[RunSummary, list[Path]]:
    """Run, write reports, then raise AcceptanceError if ``spec.check`` and a check failed."""
    logger.info("running %s (seed=%d, threads=%d)", spec.name, spec.seed, spec.threads)
    start = time.perf_counter()
    outcome = RUNNERS[spec.name](spec)
    elapsed = time.perf_counter() - start
    summary = RunSummary(
        experiment=spec.name,
        config_hash=spec.config.config_hash(),
        seed=spec.seed,
        E0=outcome.E0,
        wall_clock=elapsed,
        checks=outcome.checks,
        headline=outcome.headline,
    )
    snaps = SnapshotSet(outcome.snapshots, spec.config.snapshots.format) if outcome.snapshots else None
    paths = emit_report(spec.out_dir, summary, outcome.tables, snaps)
    failed = [name for name, ok in outcome.checks.items() if not ok]
    for name in failed:
        logger.warning("%s: check %s failed", spec.name, name)
    if spec.check and failed:
        raise AcceptanceError(f"{spec.name}: {len(failed)} acceptance check(s) failed: {', '.join(failed)}", failed)
    return summary, paths
