import numpy as np
import pytest

from boussinesq_lab.diagnostics import cancellation_I1, cancellation_J1
from boussinesq_lab.nonlinear import random_band_field, random_solenoidal
from boussinesq_lab.spectral import SpectralField, VectorField, laplacian, perp_gradient


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_both_integrals_vanish_for_solenoidal_velocity(grid16, seed):
    s = random_solenoidal(grid16, 1.0, np.random.default_rng(seed), band=5)
    for check in (cancellation_I1(s.u, s.theta), cancellation_J1(s.u, s.theta)):
        assert check.scale > 0
        assert check.relative <= 1e-12


@pytest.mark.parametrize("seed", [3, 4])
def test_cancellations_hold_on_full_spectrum_fields(grid16, seed):
    rng = np.random.default_rng(seed)
    psi = SpectralField.from_physical(grid16, rng.standard_normal(grid16.shape))
    theta = SpectralField.from_physical(grid16, rng.standard_normal(grid16.shape))
    u = perp_gradient(psi)
    for check in (cancellation_I1(u, theta), cancellation_J1(u, theta)):
        assert check.scale > 0
        assert check.relative <= 1e-10


def test_j1_vanishes_on_the_nyquist_row(grid16):
    # Content only at xi1 = +-1 on the xi2 Nyquist column.
    i = np.arange(grid16.n1)[:, None]
    j = np.arange(grid16.n2)[None, :]
    alternating = (-1.0) ** j
    theta = SpectralField.from_physical(grid16, np.cos(2 * np.pi * i / grid16.n1) * alternating)
    psi = SpectralField.from_physical(grid16, np.sin(2 * np.pi * i / grid16.n1) * alternating)
    assert abs(theta.amplitude(1, -grid16.n2 // 2)) > 0.1

    u = perp_gradient(psi)
    check = cancellation_J1(u, theta)
    assert check.scale > 0
    assert check.relative <= 1e-12
    # The full-symbol Laplacian disagrees on this mode.
    assert not np.allclose(laplacian(theta).coeffs, theta.multiply(-grid16.kodd_sq).coeffs)


def test_divergent_velocity_breaks_the_cancellation(grid16, rng):
    u = VectorField(random_band_field(grid16, rng, 4), random_band_field(grid16, rng, 4))
    theta = random_band_field(grid16, rng, 4)
    assert cancellation_I1(u, theta).relative > 1e-6
    assert cancellation_J1(u, theta).relative > 1e-6
