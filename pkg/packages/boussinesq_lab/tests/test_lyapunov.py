import math

import numpy as np
import pytest

from boussinesq_lab.diagnostics import (
    CutoffFilter,
    admissible_lambda,
    c0_constant,
    check_lambda,
    dissipation_residuals,
    filtered_h1_sq,
    lower_bound_constant,
    lower_bound_holds,
    lyapunov_AB,
    lyapunov_series,
)
from boussinesq_lab.errors import AdmissibilityError, InvalidInputError
from boussinesq_lab.linear import trajectory
from boussinesq_lab.models import Params
from boussinesq_lab.nonlinear import random_solenoidal

FILT = CutoffFilter()


@pytest.fixture
def s0(grid16, rng):
    return random_solenoidal(grid16, 1.0, rng, band=5).to_linear()


def test_constants_for_unit_parameters(params):
    assert admissible_lambda(params, 1.0, 1.0) == pytest.approx(0.5)
    assert c0_constant(params, 1.0, 1.0, 0.5) == pytest.approx(0.125)
    assert lower_bound_constant(params, 1.0, 1.0, 0.5) == pytest.approx(0.5)


def test_admissible_lambda_is_the_tighter_constraint():
    p = Params(nu=4.0, eta=1.0)
    # (4 + 1)/2 = 2.5 against sqrt(4)/2 = 1
    assert admissible_lambda(p, 1.0, 1.0) == pytest.approx(1.0)


def test_lambda_outside_the_range(params):
    with pytest.raises(AdmissibilityError):
        check_lambda(params, 1.0, 1.0, 0.6)
    with pytest.raises(AdmissibilityError):
        check_lambda(params, 1.0, 1.0, 0.0)
    with pytest.raises(InvalidInputError):
        admissible_lambda(params, 0.0, 1.0)


@pytest.mark.parametrize("field", ["u", "theta"])
def test_B_dominates_C0_A(s0, params, field):
    states = trajectory(s0, np.linspace(0.0, 4.0, 9), params)
    for report in lyapunov_series(states, params, FILT, field=field):
        assert report.A > 0
        assert report.B >= report.C0 * report.A


@pytest.mark.parametrize("field", ["u", "theta"])
def test_A_decays_exponentially(s0, params, field):
    ts = np.linspace(0.0, 6.0, 13)
    reports = lyapunov_series(trajectory(s0, ts, params), params, FILT, field=field)
    A0, C0 = reports[0].A, reports[0].C0
    for r in reports:
        assert r.A <= A0 * math.exp(-2.0 * C0 * r.t) * (1.0 + 1e-10)


def test_dissipation_identity(s0, params):
    h = 1e-4
    reports = lyapunov_series(trajectory(s0, [1.0 + k * h for k in range(5)], params), params, FILT)
    res = dissipation_residuals(reports)
    assert res.shape == (3,)
    assert res.max() <= 1e-5 * max(r.B for r in reports)


def test_central_method_agrees_with_exact(s0, params):
    h = 1e-4
    traj = trajectory(s0, [0.5 - h, 0.5, 0.5 + h], params)
    exact = lyapunov_AB(traj, params, FILT)
    central = lyapunov_AB(traj, params, FILT, method="central")
    assert exact.t == central.t == pytest.approx(0.5)
    assert central.A == pytest.approx(exact.A, rel=1e-5)
    assert central.B == pytest.approx(exact.B, rel=1e-5)
    assert central.as_row()["method"] == "central"


def test_lyapunov_input_errors(s0, params):
    with pytest.raises(InvalidInputError):
        lyapunov_AB([], params, FILT)
    with pytest.raises(InvalidInputError):
        lyapunov_AB([s0, s0], params, FILT, method="central")
    with pytest.raises(InvalidInputError):
        lyapunov_AB([s0], params, FILT, field="pressure")


def test_lower_bound_on_random_states(grid16, params):
    for seed in range(5):
        s = random_solenoidal(grid16, 1.0, np.random.default_rng(seed), band=5).to_linear()
        assert lower_bound_holds(s, params, FILT, 0.5)
        assert lower_bound_holds(s, params, FILT, 0.5, field="theta")


def test_filtered_h1_ignores_removed_modes(grid16, params):
    from boussinesq_lab.nonlinear import taylor_green

    # (1, 1) modes sit on the removed strips
    s = taylor_green(grid16, 1.0).to_linear()
    assert filtered_h1_sq(s, FILT) == 0.0
    s = taylor_green(grid16, 1.0, modes=((2, 3), (1, 1))).to_linear()
    assert filtered_h1_sq(s, FILT) > 0
