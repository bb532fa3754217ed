"""
Anisotropic triple product bound

    int |f g h| <= C ||f|| ||g||^(1/2) ||d2 g||^(1/2) ||h||^(1/2) ||d1 h||^(1/2).

The constant is not known explicitly; the check reports LHS / RHS so the
largest ratio over random samples can be recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import GridError
from ..nonlinear.initial import random_band_field
from ..spectral import FrequencyGrid, SpectralField, derivative, l2_norm

# RHS below this fraction of ||f|| ||g|| ||h|| counts as degenerate.
DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class TripleReport:
    lhs: float
    rhs: float
    applicable: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.applicable else math.nan


def triple_product_check(f: SpectralField, g: SpectralField, h: SpectralField) -> TripleReport:
    if not (f.grid == g.grid == h.grid):
        raise GridError("fields live on different grids")
    grid = f.grid
    lhs = float(np.sum(np.abs(f.to_physical() * g.to_physical() * h.to_physical())) * grid.cell_area)
    nf, ng, nh = l2_norm(f), l2_norm(g), l2_norm(h)
    d2g, d1h = l2_norm(derivative(g, 2)), l2_norm(derivative(h, 1))
    rhs = nf * math.sqrt(ng * d2g) * math.sqrt(nh * d1h)
    scale = nf * ng * nh
    applicable = scale > 0 and rhs > DEGENERATE_RTOL * scale
    return TripleReport(lhs=lhs, rhs=rhs, applicable=applicable)


def random_triple(
    grid: FrequencyGrid, rng: np.random.Generator, band: int
) -> tuple[SpectralField, SpectralField, SpectralField]:
    """Band-limited f, g without xi2 = 0 modes, h without xi1 = 0 modes."""
    f = random_band_field(grid, rng, band)
    g = random_band_field(grid, rng, band).multiply(grid.xi2 != 0)
    h = random_band_field(grid, rng, band).multiply(grid.xi1 != 0)
    return f, g, h


def max_triple_ratio(grid: FrequencyGrid, rng: np.random.Generator, samples: int, band: int) -> float:
    ratios = [triple_product_check(*random_triple(grid, rng, band)).ratio for _ in range(samples)]
    return float(np.nanmax(ratios)) if ratios else math.nan


def seed_spread(maxima: Sequence[float]) -> float:
    """(max - min) / max of per-seed maximum ratios; NaN when any is undefined."""
    values = np.asarray(maxima, dtype=float)
    if values.size == 0 or not np.all(np.isfinite(values)) or values.max() <= 0:
        return math.nan
    return float((values.max() - values.min()) / values.max())
