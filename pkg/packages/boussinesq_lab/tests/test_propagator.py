import numpy as np
import pytest

from boussinesq_lab.errors import InvalidInputError, SnapshotSpacingError
from boussinesq_lab.linear import (
    LinearState,
    heat_only_propagate,
    max_relative_error,
    ode_oracle,
    propagate_exact,
    time_derivative,
    trajectory,
    uniform_spacing,
    wave_residual,
    wave_residuals,
)
from boussinesq_lab.models import Params
from boussinesq_lab.nonlinear import random_band_field, random_solenoidal
from boussinesq_lab.spectral import SpectralField, VectorField


@pytest.fixture
def s0(grid16, rng):
    return random_solenoidal(grid16, 1.0, rng, band=3).to_linear()


def test_time_zero_is_identity(s0, params):
    s = propagate_exact(s0, 0.0, params)
    assert max_relative_error(s, s0, s0) == 0.0


@pytest.mark.parametrize("nu,eta", [(1.0, 1.0), (0.1, 10.0), (10.0, 0.1)])
@pytest.mark.parametrize("t", [0.1, 1.0])
def test_matches_rk4_oracle(s0, nu, eta, t):
    p = Params(nu=nu, eta=eta)
    exact = propagate_exact(s0, t, p)
    assert exact.t == pytest.approx(s0.t + t)
    assert max_relative_error(exact, ode_oracle(s0, t, p), s0) <= 1e-8


def test_semigroup(s0, params):
    direct = propagate_exact(s0, 1.0, params)
    composed = propagate_exact(propagate_exact(s0, 0.3, params), 0.7, params)
    assert max_relative_error(direct, composed, s0) <= 1e-12


def test_thread_split_does_not_change_the_result(s0, params):
    a = propagate_exact(s0, 0.5, params)
    b = propagate_exact(s0, 0.5, params, workers=4)
    assert np.array_equal(a.stacked(), b.stacked())


def test_rejects_divergent_velocity(grid16, rng, params):
    bad = LinearState(
        VectorField(random_band_field(grid16, rng, 3), random_band_field(grid16, rng, 3)),
        random_band_field(grid16, rng, 3),
    )
    with pytest.raises(InvalidInputError):
        propagate_exact(bad, 1.0, params)


def test_rejects_negative_time(s0, params):
    with pytest.raises(InvalidInputError):
        propagate_exact(s0, -1.0, params)


def test_origin_held_and_nyquist_cleared(grid16, params):
    theta = np.zeros(grid16.shape, dtype=complex)
    theta[0, 0] = 0.3
    theta[8, 1] = 0.2
    theta[1, 1] = theta[-1, -1] = 0.1
    zero = np.zeros(grid16.shape, dtype=complex)
    s = LinearState.from_arrays(grid16, zero, zero, theta)
    out = propagate_exact(s, 1.0, params)
    assert out.theta.coeffs[0, 0] == pytest.approx(0.3)
    assert out.theta.coeffs[8, 1] == 0.0
    assert abs(out.theta.coeffs[1, 1]) > 0


def test_time_derivative_matches_central_difference(s0, params):
    h = 1e-4
    before = propagate_exact(s0, 1.0 - h, params).stacked()
    after = propagate_exact(s0, 1.0 + h, params).stacked()
    mid = propagate_exact(s0, 1.0, params)
    fd = (after - before) / (2 * h)
    exact = time_derivative(mid, params).stacked()
    assert np.abs(fd - exact).max() <= 1e-6 * max(np.abs(exact).max(), 1.0)


def test_heat_only_control_differs_from_coupled_flow(s0, params):
    coupled = propagate_exact(s0, 2.0, params)
    heat = heat_only_propagate(s0, 2.0, params)
    assert max_relative_error(coupled, heat, s0) > 1e-3


@pytest.mark.parametrize("field", ["u1", "u2", "theta", "omega"])
def test_wave_residual_converges_at_second_order(s0, params, field):
    res = []
    for h in (0.02, 0.01):
        snaps = trajectory(s0, [0.5 + k * h for k in range(5)], params)
        res.append(wave_residual(snaps, params, field))
    assert res[1] > 0
    assert np.log2(res[0] / res[1]) >= 1.8


def test_wave_residuals_shape(s0, params):
    snaps = trajectory(s0, [0.0, 0.1, 0.2, 0.3], params)
    assert wave_residuals(snaps, params).shape == (2,)


def test_wave_residual_needs_uniform_snapshots(s0, params):
    snaps = trajectory(s0, [0.0, 0.1, 0.3], params)
    with pytest.raises(SnapshotSpacingError):
        wave_residual(snaps, params)
    with pytest.raises(SnapshotSpacingError):
        uniform_spacing([0.0, 1.0])


def test_wave_residual_of_zero_trajectory_is_zero(grid16, params):
    zero = LinearState.zeros(grid16)
    snaps = [LinearState(zero.u, zero.theta, t) for t in (0.0, 0.1, 0.2)]
    assert wave_residual(snaps, params) == 0.0


def test_component_rejects_unknown_name(s0):
    with pytest.raises(InvalidInputError):
        s0.component("pressure")
    assert isinstance(s0.component("omega"), SpectralField)
