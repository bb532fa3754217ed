"""Functionals and checks evaluated on linear and nonlinear trajectories."""

from .cancellations import Cancellation, cancellation_I1, cancellation_J1
from .cutoff import CutoffFilter, apply_cutoff, apply_cutoff_state, apply_cutoff_vector, cutoff_mask
from .energy import EnergyReport, energy_balance, energy_functional, integral_growth_rates, max_growth
from .fitting import DecayFit, default_window, fit_decay_rate
from .lyapunov import (
    LyapunovReport,
    admissible_lambda,
    c0_constant,
    check_lambda,
    dissipation_residuals,
    filtered_h1_sq,
    lower_bound_constant,
    lower_bound_holds,
    lyapunov_AB,
    lyapunov_pair,
    lyapunov_series,
)
from .triple import TripleReport, max_triple_ratio, random_triple, seed_spread, triple_product_check

__all__ = [
    "Cancellation",
    "CutoffFilter",
    "DecayFit",
    "EnergyReport",
    "LyapunovReport",
    "TripleReport",
    "admissible_lambda",
    "apply_cutoff",
    "apply_cutoff_state",
    "apply_cutoff_vector",
    "c0_constant",
    "cancellation_I1",
    "cancellation_J1",
    "check_lambda",
    "cutoff_mask",
    "default_window",
    "dissipation_residuals",
    "energy_balance",
    "energy_functional",
    "filtered_h1_sq",
    "fit_decay_rate",
    "integral_growth_rates",
    "lower_bound_constant",
    "lower_bound_holds",
    "lyapunov_AB",
    "lyapunov_pair",
    "lyapunov_series",
    "max_growth",
    "max_triple_ratio",
    "random_triple",
    "seed_spread",
    "triple_product_check",
]
