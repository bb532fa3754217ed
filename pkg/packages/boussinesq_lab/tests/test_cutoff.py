import numpy as np
import pytest
from pydantic import ValidationError

from boussinesq_lab.diagnostics import CutoffFilter, apply_cutoff, apply_cutoff_state, cutoff_mask
from boussinesq_lab.nonlinear import random_band_field, random_solenoidal
from boussinesq_lab.spectral import make_grid


def test_mask_drops_low_frequency_strips(grid16):
    mask = cutoff_mask(grid16, CutoffFilter())
    # |i| >= 2 leaves 13 of 16 indices per axis
    assert int(mask.sum()) == 13 * 13
    assert not mask[1, 5] and not mask[5, 0]
    assert mask[2, 2] and mask[-2, 3]


def test_thresholds_scale_with_the_box():
    grid = make_grid(16, 16, L1=2.0, L2=1.0)
    mask = cutoff_mask(grid, CutoffFilter(a1=1.0, a2=1.0))
    # xi1 = i1 / 2, so |xi1| > 1 needs |i1| >= 3
    assert not mask[2, 2]
    assert mask[3, 2]


def test_apply_cutoff_zeroes_the_strips(grid16, rng):
    f = random_band_field(grid16, rng, 4)
    out = apply_cutoff(f, CutoffFilter(a1=2.0, a2=1.0))
    assert np.all(out.coeffs[:3, :] == 0)
    assert np.all(out.coeffs[:, :2] == 0)
    assert out.coeffs[3, 3] == f.coeffs[3, 3]


def test_apply_cutoff_state_keeps_time_and_solenoidality(grid16, rng):
    s = random_solenoidal(grid16, 1.0, rng).to_linear()
    out = apply_cutoff_state(s, CutoffFilter())
    assert out.t == s.t
    assert out.u.solenoidal


def test_filter_validates_thresholds():
    with pytest.raises(ValidationError):
        CutoffFilter(a1=0.0)
    with pytest.raises(ValidationError):
        CutoffFilter(a3=1.0)
