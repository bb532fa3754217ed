import math

import numpy as np
import pytest

from boussinesq_lab.errors import GridError
from boussinesq_lab.models import GridSpec, SimConfig
from boussinesq_lab.nonlinear import (
    random_solenoidal,
    run,
    vorticity_diagnostics,
    vorticity_residual_fd,
    vorticity_rhs,
)
from boussinesq_lab.spectral import curl, l2_norm, make_grid


@pytest.fixture
def init(grid16, rng):
    return random_solenoidal(grid16, 1.0, rng, band=3)


@pytest.mark.parametrize("nonlinear", [True, False])
def test_velocity_tendency_carries_the_vorticity_equation(init, params, nonlinear):
    report = vorticity_diagnostics(init, params, nonlinear=nonlinear)
    assert report.relative_residual < 1e-10
    assert report.omega_l2 == pytest.approx(l2_norm(curl(init.u)))
    assert report.grad_omega_l2 > report.omega_l2  # all modes have |k| >= 1


def test_advection_changes_the_rhs(init, params):
    with_adv = vorticity_rhs(init, params)
    without = vorticity_rhs(init, params, nonlinear=False)
    assert (with_adv - without).max_abs() > 0


def _snapshots(init, h):
    cfg = SimConfig(grid=GridSpec(n1=16, n2=16), dt=h, T=2 * h, cadence=1)
    return run(cfg, init, keep_states=True).snapshots


def test_finite_difference_residual_is_second_order(init, params):
    res = [vorticity_residual_fd(*_snapshots(init, h), params) for h in (0.02, 0.01)]
    assert res[1] < res[0]
    assert math.log2(res[0] / res[1]) >= 1.8


def test_finite_difference_residual_checks_grids(init, params, rng):
    other = random_solenoidal(make_grid(8, 8), 1.0, rng, band=2)
    a, b, _ = _snapshots(init, 0.01)
    with pytest.raises(GridError):
        vorticity_residual_fd(a, b, other, params)


def test_zero_state_has_zero_residual(grid16, params):
    from boussinesq_lab.nonlinear import NonlinearState

    report = vorticity_diagnostics(NonlinearState.zeros(grid16), params)
    assert report.residual == 0.0
    assert report.relative_residual == 0.0
    assert np.isclose(report.omega_l2, 0.0)
