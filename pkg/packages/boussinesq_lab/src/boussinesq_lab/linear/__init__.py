"""Exact linear evolution, RK4 oracle, Duhamel forcing and snapshot files."""

from .duhamel import duhamel_apply, duhamel_scalar, g1_integral, wave_solution
from .propagator import (
    LinearState,
    grid_kernels,
    heat_only_propagate,
    max_relative_error,
    ode_oracle,
    oracle_step_size,
    propagate_exact,
    time_derivative,
    trajectory,
    uniform_spacing,
    wave_residual,
    wave_residuals,
)
from .snapshots import (
    read_snapshots_binary,
    read_snapshots_csv,
    snapshots_from_bytes,
    snapshots_to_bytes,
    snapshots_to_csv,
    write_snapshots_binary,
    write_snapshots_csv,
)

__all__ = [
    "LinearState",
    "duhamel_apply",
    "duhamel_scalar",
    "g1_integral",
    "grid_kernels",
    "heat_only_propagate",
    "max_relative_error",
    "ode_oracle",
    "oracle_step_size",
    "propagate_exact",
    "read_snapshots_binary",
    "read_snapshots_csv",
    "snapshots_from_bytes",
    "snapshots_to_bytes",
    "snapshots_to_csv",
    "time_derivative",
    "trajectory",
    "uniform_spacing",
    "wave_residual",
    "wave_residuals",
    "wave_solution",
    "write_snapshots_binary",
    "write_snapshots_csv",
]
