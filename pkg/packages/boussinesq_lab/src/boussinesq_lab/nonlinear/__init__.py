"""Nonlinear perturbation solver: state, initial data, time stepping and vorticity checks."""

from .initial import band_mask, combined_h2_norm, random_band_field, random_solenoidal, rescale, taylor_green
from .solver import (
    CFL_LIMIT,
    GROWTH_FACTOR,
    RunResult,
    Simulation,
    TwinReport,
    cfl_number,
    check_cfl,
    dissipation_symbol,
    iter_run,
    max_velocity,
    nonlinear_tendency,
    run,
    step,
    tendency,
    twin_convergence,
)
from .state import NonlinearState, clean
from .vorticity import VorticityReport, vorticity_diagnostics, vorticity_residual_fd, vorticity_rhs

__all__ = [
    "CFL_LIMIT",
    "GROWTH_FACTOR",
    "NonlinearState",
    "RunResult",
    "Simulation",
    "TwinReport",
    "VorticityReport",
    "band_mask",
    "cfl_number",
    "check_cfl",
    "clean",
    "combined_h2_norm",
    "dissipation_symbol",
    "iter_run",
    "max_velocity",
    "nonlinear_tendency",
    "random_band_field",
    "random_solenoidal",
    "rescale",
    "run",
    "step",
    "taylor_green",
    "tendency",
    "twin_convergence",
    "vorticity_diagnostics",
    "vorticity_residual_fd",
    "vorticity_rhs",
]
