import math

import numpy as np
import pytest

from boussinesq_lab.errors import GridError, QuadratureError
from boussinesq_lab.kernels import symbol_coefficients
from boussinesq_lab.linear import duhamel_apply, duhamel_scalar, g1_integral, wave_solution
from boussinesq_lab.nonlinear import random_band_field
from boussinesq_lab.spectral import SpectralField, make_grid


@pytest.mark.parametrize(
    "l1,l2", [(-1.0 + 0j, -3.0 + 0j), (-1.0 - 2.0j, -1.0 + 2.0j), (-2.0 + 0j, -2.0 + 0j)]
)
def test_constant_forcing_matches_closed_form(l1, l2):
    t = 1.5
    mesh = np.linspace(0.0, t, 401)
    value = duhamel_scalar(l1, l2, np.ones(mesh.size), t, times=mesh)
    assert value == pytest.approx(g1_integral(l1, l2, t), rel=1e-9)


def test_g1_integral_double_root_at_zero():
    assert g1_integral(0.0, 0.0, 2.0) == pytest.approx(2.0)


def test_manufactured_wave_solution(params, rng):
    # f = e^{-t} f0 solves f'' + p f' + q f = (1 - p + q) e^{-t} f0 with f'(0) = -f0
    grid = make_grid(8, 8)
    f0 = random_band_field(grid, rng, 2)
    damping, stiffness = symbol_coefficients(grid.xi1, grid.xi2, params)
    source = f0.multiply(1.0 - damping + stiffness)
    mesh = np.linspace(0.0, 1.0, 201)
    forcing = [source * math.exp(-tau) for tau in mesh]
    solved = wave_solution(f0, -f0, forcing, 1.0, params, times=mesh)
    expected = f0 * math.exp(-1.0)
    assert (solved - expected).max_abs() <= 1e-6 * f0.max_abs()


def test_zero_forcing_gives_zero(grid16, params):
    forcing = [SpectralField.zeros(grid16)] * 5
    assert duhamel_apply(forcing, 1.0, params).max_abs() == 0.0


def test_too_few_samples(grid16, params):
    with pytest.raises(QuadratureError):
        duhamel_apply([SpectralField.zeros(grid16)] * 2, 1.0, params)
    with pytest.raises(QuadratureError):
        duhamel_apply([], 1.0, params)


def test_nonuniform_mesh_rejected(grid16, params):
    forcing = [SpectralField.zeros(grid16)] * 3
    with pytest.raises(QuadratureError):
        duhamel_apply(forcing, 1.0, params, times=[0.0, 0.2, 1.0])


def test_mixed_grids_rejected(grid16, params):
    other = make_grid(8, 8)
    with pytest.raises(GridError):
        duhamel_apply([SpectralField.zeros(grid16), SpectralField.zeros(other), SpectralField.zeros(grid16)], 1.0, params)
