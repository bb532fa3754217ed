import math

import numpy as np
import pytest

from boussinesq_lab.diagnostics import max_triple_ratio, random_triple, seed_spread, triple_product_check
from boussinesq_lab.errors import GridError
from boussinesq_lab.nonlinear import random_band_field
from boussinesq_lab.spectral import SpectralField, make_grid


def test_ratio_stays_moderate_on_random_samples(grid16, rng):
    for _ in range(10):
        report = triple_product_check(*random_triple(grid16, rng, 4))
        assert report.applicable
        assert 0 < report.ratio < 10


def test_degenerate_rhs_is_not_applicable(grid16, rng):
    f, _, h = random_triple(grid16, rng, 3)
    # g constant in x2, so d2 g vanishes
    g = random_band_field(grid16, rng, 3).multiply(grid16.xi2 == 0)
    report = triple_product_check(f, g, h)
    assert not report.applicable
    assert math.isnan(report.ratio)
    zero = triple_product_check(SpectralField.zeros(grid16), g, h)
    assert not zero.applicable


def test_max_ratio_over_samples(grid16):
    value = max_triple_ratio(grid16, np.random.default_rng(3), 8, 4)
    assert np.isfinite(value) and value > 0
    assert math.isnan(max_triple_ratio(grid16, np.random.default_rng(3), 0, 4))


def test_max_ratio_is_stable_across_seeds(grid16):
    maxima = [max_triple_ratio(grid16, np.random.default_rng(seed), 1000, 5) for seed in (21, 22)]
    assert all(np.isfinite(m) for m in maxima)
    assert seed_spread(maxima) <= 0.2


def test_seed_spread():
    assert seed_spread([2.0, 1.5]) == pytest.approx(0.25)
    assert seed_spread([1.0, 1.0, 1.0]) == 0.0
    assert math.isnan(seed_spread([]))
    assert math.isnan(seed_spread([1.0, math.nan]))


def test_mixed_grids(grid16, rng):
    f, g, _ = random_triple(grid16, rng, 2)
    h = random_band_field(make_grid(8, 8), rng, 2)
    with pytest.raises(GridError):
        triple_product_check(f, g, h)
