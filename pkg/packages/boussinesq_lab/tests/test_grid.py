import math

import numpy as np
import pytest

from boussinesq_lab.errors import GridError
from boussinesq_lab.models import GridSpec
from boussinesq_lab.spectral import FrequencyGrid, make_grid


@pytest.mark.parametrize("n1,n2", [(3, 8), (7, 8), (8, 2), (8, 9)])
def test_rejects_odd_or_tiny_sizes(n1, n2):
    with pytest.raises(GridError):
        FrequencyGrid(n1, n2)


def test_rejects_nonpositive_length():
    with pytest.raises(GridError):
        FrequencyGrid(8, 8, L1=0.0)


def test_wavenumbers_follow_fft_order_and_domain_length():
    g = make_grid(8, 4, L1=2.0, L2=0.5)
    assert g.index1.tolist() == [0, 1, 2, 3, -4, -3, -2, -1]
    assert np.allclose(g.k1, g.index1 / 2.0)
    assert np.allclose(g.k2, np.array([0, 1, -2, -1]) / 0.5)
    assert g.xi1.shape == g.xi2.shape == (8, 4)


def test_odd_wavenumbers_zero_the_nyquist_line(grid16):
    assert np.all(grid16.xi1_odd[8, :] == 0.0)
    assert np.all(grid16.xi2_odd[:, 8] == 0.0)
    assert np.array_equal(grid16.xi1_odd[:8], grid16.xi1[:8])


def test_cellweight_is_domain_area():
    g = make_grid(8, 8, L1=2.0, L2=3.0)
    assert g.cellweight == pytest.approx((2 * math.pi) ** 2 * 6.0)
    assert g.cell_area * 64 == pytest.approx(g.cellweight)


def test_masks(grid16):
    assert grid16.origin_mask.sum() == 1
    assert grid16.nyquist_mask.sum() == 16 + 16 - 1
    assert not np.any(grid16.resolved_mask & grid16.nyquist_mask)
    kept = np.abs(grid16.index1) <= 16 / 3
    assert np.array_equal(grid16.dealias_mask[:, 0], kept)


def test_cached_arrays_are_shared_and_read_only(grid16):
    assert grid16.ksq is make_grid(16, 16).ksq
    with pytest.raises(ValueError):
        grid16.ksq[0, 0] = 1.0


def test_position_round_trips_signed_indices(grid16):
    assert grid16.position(-1, 3) == (15, 3)
    assert grid16.index1[15] == -1
    with pytest.raises(GridError):
        grid16.position(8, 0)


def test_from_spec():
    g = FrequencyGrid.from_spec(GridSpec(n1=8, n2=12, L1=1.5))
    assert g.shape == (8, 12)
    assert g.L1 == 1.5
