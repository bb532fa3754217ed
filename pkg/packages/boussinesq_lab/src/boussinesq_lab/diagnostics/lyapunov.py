"""
Lyapunov pair (A, B) for the frequency-filtered linear solution.

Every filtered component w (u1, u2 or theta) solves w'' + p w' + q w = 0
mode by mode. With v = w' and weight lambda,

    A = sum |v|^2 + (q + lambda p)|w|^2 + 2 lambda Re(v conj(w))
    B = sum (p - lambda)|v|^2 + lambda q |w|^2

so that dA/dt + 2B = 0 along exact trajectories, and B >= C0 A for
admissible lambda gives A(t) <= A(0) exp(-2 C0 t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import AdmissibilityError, InvalidInputError
from ..kernels.symbols import symbol_coefficients
from ..linear.propagator import LinearState, time_derivative, uniform_spacing
from ..models import Params
from .cutoff import CutoffFilter, apply_cutoff_state, cutoff_mask

LyapunovField = Literal["u", "theta"]
Method = Literal["exact", "central"]

REPORT_COLUMNS = ["t", "field", "A", "B", "C0", "lambda", "ratio", "method"]


def admissible_lambda(p: Params, a1: float, a2: float) -> float:
    """Largest lambda with lambda <= (nu a2^2 + eta a1^2)/2 and lambda <= sqrt(nu eta) a1 a2 / 2."""
    if a1 <= 0 or a2 <= 0:
        raise InvalidInputError(f"cutoff thresholds must be positive, got a1={a1}, a2={a2}")
    return min(0.5 * (p.nu * a2**2 + p.eta * a1**2), 0.5 * math.sqrt(p.nu * p.eta) * a1 * a2)


def check_lambda(p: Params, a1: float, a2: float, lam: float) -> float:
    top = admissible_lambda(p, a1, a2)
    if not 0 < lam <= top * (1.0 + 1e-12):
        raise AdmissibilityError(
            f"lambda={lam} outside the admissible range (0, {top}] for a1={a1}, a2={a2}",
            meta={"lambda": lam, "max": top},
        )
    return lam


def c0_constant(p: Params, a1: float, a2: float, lam: float) -> float:
    check_lambda(p, a1, a2, lam)
    P = p.nu * a2**2 + p.eta * a1**2
    return 0.25 * min(
        P,
        lam,
        p.eta * a1**2,
        p.nu * a2**2,
        math.sqrt(P) * math.sqrt(p.eta * p.nu * a1**2 * a2**2) / math.sqrt(lam),
    )


def lower_bound_constant(p: Params, a1: float, a2: float, lam: float) -> float:
    """c with A >= c (||w'||^2 + ||w||_{H1}^2) on filtered data."""
    check_lambda(p, a1, a2, lam)
    return min(0.5, 0.5 * p.eta * p.nu * a1**2 * a2**2, lam * p.nu, lam * p.eta)


@dataclass(frozen=True)
class LyapunovReport:
    t: float
    A: float
    B: float
    C0: float
    lam: float
    field: LyapunovField = "u"
    method: Method = "exact"

    @property
    def ratio(self) -> float:
        return self.B / self.A if self.A > 0 else math.inf

    def as_row(self) -> dict[str, object]:
        return {
            "t": self.t,
            "field": self.field,
            "A": self.A,
            "B": self.B,
            "C0": self.C0,
            "lambda": self.lam,
            "ratio": self.ratio,
            "method": self.method,
        }


def _components(s: LinearState, field: LyapunovField) -> np.ndarray:
    if field == "u":
        return np.stack([s.u.u1.coeffs, s.u.u2.coeffs])
    if field == "theta":
        return s.theta.coeffs[None]
    raise InvalidInputError(f"unknown Lyapunov field {field!r}")


def lyapunov_pair(
    s: LinearState,
    ds: LinearState,
    p: Params,
    lam: float,
    field: LyapunovField = "u",
) -> tuple[float, float]:
    """(A, B) for the state ``s`` with time derivative ``ds`` (both already filtered)."""
    grid = s.grid
    damping, stiffness = symbol_coefficients(grid.xi1, grid.xi2, p)
    w = _components(s, field)
    v = _components(ds, field)
    vv = np.sum(np.abs(v) ** 2, axis=0)
    ww = np.sum(np.abs(w) ** 2, axis=0)
    vw = np.sum(np.real(v * np.conj(w)), axis=0)
    cw = grid.cellweight
    A = cw * float(np.sum(vv + (stiffness + lam * damping) * ww + 2.0 * lam * vw))
    B = cw * float(np.sum((damping - lam) * vv + lam * stiffness * ww))
    return A, B


def lyapunov_AB(
    traj: Sequence[LinearState],
    p: Params,
    filt: CutoffFilter,
    lam: float | None = None,
    *,
    field: LyapunovField = "u",
    method: Method = "exact",
) -> LyapunovReport:
    """A and B at the middle of ``traj`` (one state suffices for the exact method).

    ``exact`` takes the time derivative from the linear system; ``central``
    differences the neighbouring snapshots and needs three of them.
    """
    lam = admissible_lambda(p, filt.a1, filt.a2) if lam is None else check_lambda(p, filt.a1, filt.a2, lam)
    C0 = c0_constant(p, filt.a1, filt.a2, lam)
    if not traj:
        raise InvalidInputError("empty trajectory")
    mid = apply_cutoff_state(traj[len(traj) // 2], filt)
    if method == "exact":
        ds = time_derivative(mid, p)
    elif method == "central":
        if len(traj) != 3:
            raise InvalidInputError("central differences need exactly three snapshots")
        h = uniform_spacing([s.t for s in traj])
        prev = apply_cutoff_state(traj[0], filt).stacked()
        nxt = apply_cutoff_state(traj[2], filt).stacked()
        d = (nxt - prev) / (2.0 * h)
        ds = LinearState.from_arrays(mid.grid, d[0], d[1], d[2], mid.t)
    else:
        raise InvalidInputError(f"unknown derivative method {method!r}")
    A, B = lyapunov_pair(mid, ds, p, lam, field)
    return LyapunovReport(t=mid.t, A=A, B=B, C0=C0, lam=lam, field=field, method=method)


def lyapunov_series(
    states: Sequence[LinearState],
    p: Params,
    filt: CutoffFilter,
    lam: float | None = None,
    *,
    field: LyapunovField = "u",
) -> list[LyapunovReport]:
    return [lyapunov_AB([s], p, filt, lam, field=field) for s in states]


def dissipation_residuals(reports: Sequence[LyapunovReport]) -> np.ndarray:
    """|dA/dt + 2B| at interior samples, dA/dt by central differences."""
    h = uniform_spacing([r.t for r in reports])
    A = np.array([r.A for r in reports])
    B = np.array([r.B for r in reports])
    return np.abs((A[2:] - A[:-2]) / (2.0 * h) + 2.0 * B[1:-1])


def lower_bound_holds(
    s: LinearState, p: Params, filt: CutoffFilter, lam: float, field: LyapunovField = "u"
) -> bool:
    """A >= c (||w'||^2 + ||w||^2 + ||grad w||^2) for the filtered state."""
    w_state = apply_cutoff_state(s, filt)
    ds = time_derivative(w_state, p)
    A, _ = lyapunov_pair(w_state, ds, p, lam, field)
    grid = s.grid
    w = _components(w_state, field)
    v = _components(ds, field)
    cw = grid.cellweight
    rhs = cw * float(np.sum(np.abs(v) ** 2) + np.sum((1.0 + grid.ksq) * np.abs(w) ** 2))
    c = lower_bound_constant(p, filt.a1, filt.a2, lam)
    return A >= c * rhs * (1.0 - 1e-12)


def filtered_h1_sq(s: LinearState, filt: CutoffFilter) -> float:
    """||phi * u||_{H1}^2."""
    grid = s.grid
    mask = cutoff_mask(grid, filt)
    a = np.abs(s.u.u1.coeffs) ** 2 + np.abs(s.u.u2.coeffs) ** 2
    return grid.cellweight * float(np.sum(mask * (1.0 + grid.ksq) * a))
