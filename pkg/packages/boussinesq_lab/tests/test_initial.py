import numpy as np
import pytest

from boussinesq_lab.errors import InvalidInputError
from boussinesq_lab.nonlinear import (
    NonlinearState,
    band_mask,
    combined_h2_norm,
    random_band_field,
    random_solenoidal,
    rescale,
    taylor_green,
)
from boussinesq_lab.spectral import divergence_ratio


@pytest.mark.parametrize("eps", [1e-3, 0.5, 2.0])
def test_random_solenoidal_has_requested_norm(grid16, rng, eps):
    s = random_solenoidal(grid16, eps, rng, band=3)
    assert combined_h2_norm(s) == pytest.approx(eps, rel=1e-12)
    assert s.is_clean()
    assert divergence_ratio(s.u) < 1e-14


def test_random_solenoidal_is_reproducible(grid16):
    a = random_solenoidal(grid16, 1.0, np.random.default_rng(7))
    b = random_solenoidal(grid16, 1.0, np.random.default_rng(7))
    assert np.array_equal(a.stacked(), b.stacked())


def test_band_mask_counts_modes(grid16):
    mask = band_mask(grid16, 1)
    assert int(mask.sum()) == 8
    assert not mask[0, 0]
    # band wider than the dealiased range is clipped by it
    assert int(band_mask(grid16, 7).sum()) == int(grid16.dealias_mask.sum()) - 1


def test_band_mask_rejects_empty_band(grid16):
    with pytest.raises(InvalidInputError):
        band_mask(grid16, 0)


def test_random_band_field_is_real_and_limited(grid16, rng):
    f = random_band_field(grid16, rng, 2)
    assert f.is_hermitian()
    assert np.all(f.coeffs[~band_mask(grid16, 2)] == 0)


def test_taylor_green_modes(grid16):
    s = taylor_green(grid16, 0.3, modes=((1, 2), (2, 1)))
    assert combined_h2_norm(s) == pytest.approx(0.3)
    u1 = np.abs(s.u.u1.coeffs) > 1e-14
    th = np.abs(s.theta.coeffs) > 1e-14
    assert {tuple(int(v) for v in idx) for idx in np.argwhere(th)} == {(2, 1), (2, 15), (14, 1), (14, 15)}
    assert {tuple(int(v) for v in idx) for idx in np.argwhere(u1)} == {(1, 2), (1, 14), (15, 2), (15, 14)}


def test_taylor_green_rejects_modes_outside_dealiased_range(grid16):
    with pytest.raises(InvalidInputError):
        taylor_green(grid16, 1.0, modes=((6, 1), (1, 1)))
    with pytest.raises(InvalidInputError):
        taylor_green(grid16, 1.0, modes=((1, 1), (0, 1)))


def test_rescale_edge_cases(grid16, rng):
    zero = NonlinearState.zeros(grid16)
    assert rescale(zero, 0.0) is zero
    with pytest.raises(InvalidInputError):
        rescale(zero, 1.0)
    with pytest.raises(InvalidInputError):
        rescale(random_solenoidal(grid16, 1.0, rng), -1.0)
