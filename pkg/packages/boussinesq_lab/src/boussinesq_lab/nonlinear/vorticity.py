"""
Vorticity omega = d1 u2 - d2 u1 and the residual of its evolution equation

    omega_t + u.grad omega = nu d22 omega + d1 theta.

The solver evolves u, not omega, so the residual measures how well the
velocity tendency carries the vorticity dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import GridError
from ..models import Params
from ..spectral import (
    SpectralField,
    curl,
    derivative,
    gradient,
    l2_norm,
    pointwise_product,
)
from ..linear.propagator import uniform_spacing
from .solver import dissipation_symbol, tendency
from .state import NonlinearState


@dataclass(frozen=True)
class VorticityReport:
    t: float
    omega_l2: float
    grad_omega_l2: float
    residual: float
    scale: float

    @property
    def relative_residual(self) -> float:
        return self.residual / self.scale if self.scale > 0 else 0.0


def vorticity_rhs(s: NonlinearState, p: Params, *, nonlinear: bool = True) -> SpectralField:
    """-u.grad omega + nu d22 omega + d1 theta, with the dealiased advection product."""
    omega = curl(s.u)
    rhs = p.nu * derivative(omega, 2, 2) + derivative(s.theta, 1)
    if nonlinear:
        g = gradient(omega)
        adv = pointwise_product(s.u.u1, g.u1) + pointwise_product(s.u.u2, g.u2)
        rhs = rhs - adv
    return rhs


def _scale(*fields: SpectralField) -> float:
    return max((l2_norm(f) for f in fields), default=0.0)


def vorticity_diagnostics(
    s: NonlinearState, p: Params, *, nonlinear: bool = True
) -> VorticityReport:
    """Norms of omega and the residual curl(du/dt) - rhs for the solver's own tendency."""
    grid = s.grid
    omega = curl(s.u)
    grad_sq = float(grid.cellweight * np.sum(grid.ksq * np.abs(omega.coeffs) ** 2))
    y = s.stacked()
    dy = dissipation_symbol(grid, p) * y + tendency(grid, y, nonlinear=nonlinear)
    omega_t = SpectralField._wrap(grid, 1j * grid.xi1_odd * dy[1] - 1j * grid.xi2_odd * dy[0])
    rhs = vorticity_rhs(s, p, nonlinear=nonlinear)
    residual = omega_t - rhs
    return VorticityReport(
        t=s.t,
        omega_l2=l2_norm(omega),
        grad_omega_l2=math.sqrt(grad_sq),
        residual=l2_norm(residual),
        scale=_scale(omega_t, rhs),
    )


def vorticity_residual_fd(
    prev: NonlinearState,
    cur: NonlinearState,
    nxt: NonlinearState,
    p: Params,
    *,
    nonlinear: bool = True,
) -> float:
    """L2 residual of the vorticity equation with a central difference in time at ``cur``."""
    if not (prev.grid == cur.grid == nxt.grid):
        raise GridError("snapshots live on different grids")
    h = uniform_spacing([prev.t, cur.t, nxt.t])
    omega_t = (curl(nxt.u) - curl(prev.u)) * (1.0 / (2.0 * h))
    return l2_norm(omega_t - vorticity_rhs(cur, p, nonlinear=nonlinear))
