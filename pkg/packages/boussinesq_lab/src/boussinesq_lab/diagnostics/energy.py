"""
The nonlinear energy functional

    E(t) = max_{s<=t} (||u||_{H2}^2 + ||theta||_{H2}^2)
           + 2 nu int ||d2 u||_{H2}^2 + 2 eta int ||d1 theta||_{H2}^2
           + delta int ||d1 u2||^2

and the drift of the L2 energy identity, both built from the solver's
cadence records.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Any, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..errors import InvalidInputError
from ..models import DiagnosticsRecord, Params


@dataclass(frozen=True)
class EnergyReport:
    t: float
    h2_u_sq: float
    h2_theta_sq: float
    int_d2u_h2: float
    int_d1theta_h2: float
    int_d1u2_l2: float
    E: float
    E0: float

    @property
    def ratio(self) -> float:
        return self.E / self.E0 if self.E0 > 0 else 0.0

    def as_row(self) -> dict[str, Any]:
        row = asdict(self)
        row["ratio"] = self.ratio
        return row

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)] + ["ratio"]


def _series(records: Sequence[DiagnosticsRecord], name: str) -> np.ndarray:
    return np.array([getattr(r, name) for r in records], dtype=float)


def _times(records: Sequence[DiagnosticsRecord]) -> np.ndarray:
    t = _series(records, "t")
    if np.any(np.diff(t) <= 0):
        raise InvalidInputError("records must be strictly increasing in time")
    return t


def _integral(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    if len(t) < 2:
        return np.zeros_like(values)
    return cumulative_trapezoid(values, t, initial=0.0)


def energy_functional(
    records: Sequence[DiagnosticsRecord], delta: float, p: Params
) -> list[EnergyReport]:
    if not records:
        return []
    if delta <= 0:
        raise InvalidInputError(f"delta must be positive, got {delta}")
    t = _times(records)
    h2_u = _series(records, "h2_u_sq")
    h2_theta = _series(records, "h2_theta_sq")
    running = np.maximum.accumulate(h2_u + h2_theta)
    int_u = _integral(_series(records, "d2u_h2_sq"), t)
    int_theta = _integral(_series(records, "d1theta_h2_sq"), t)
    int_u2 = _integral(_series(records, "d1u2_l2_sq"), t)
    E = running + 2.0 * p.nu * int_u + 2.0 * p.eta * int_theta + delta * int_u2
    E0 = float(E[0])
    return [
        EnergyReport(
            t=float(t[k]),
            h2_u_sq=float(h2_u[k]),
            h2_theta_sq=float(h2_theta[k]),
            int_d2u_h2=float(int_u[k]),
            int_d1theta_h2=float(int_theta[k]),
            int_d1u2_l2=float(int_u2[k]),
            E=float(E[k]),
            E0=E0,
        )
        for k in range(len(t))
    ]


def energy_balance(records: Sequence[DiagnosticsRecord], p: Params) -> np.ndarray:
    """Relative drift of ||(u,theta)||^2 + 2 nu int ||d2 u||^2 + 2 eta int ||d1 theta||^2.

    Uses the solver's step-level integrals; absolute drift when the
    initial energy vanishes.
    """
    if not records:
        return np.zeros(0)
    l2 = _series(records, "l2_sq")
    total = l2 + 2.0 * p.nu * _series(records, "int_d2u_l2") + 2.0 * p.eta * _series(
        records, "int_d1theta_l2"
    )
    drift = total - l2[0]
    return drift / l2[0] if l2[0] > 0 else drift


def max_growth(reports: Sequence[EnergyReport]) -> float:
    """max_t E(t)/E(0)."""
    return max((r.ratio for r in reports), default=0.0)


def integral_growth_rates(reports: Sequence[EnergyReport]) -> np.ndarray:
    """Slope of the d1 u2 integral between consecutive reports."""
    if len(reports) < 2:
        return np.zeros(0)
    t = np.array([r.t for r in reports])
    val = np.array([r.int_d1u2_l2 for r in reports])
    return np.diff(val) / np.diff(t)
