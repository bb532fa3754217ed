"""Initial-data families for nonlinear runs, scaled to a prescribed combined H2 norm."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import InvalidInputError
from ..spectral import FrequencyGrid, SpectralField, h2_norm_sq, perp_gradient
from .state import NonlinearState, clean


def combined_h2_norm(s: NonlinearState) -> float:
    """(||u||_{H2}^2 + ||theta||_{H2}^2)^{1/2}."""
    return math.sqrt(h2_norm_sq(s.u.u1) + h2_norm_sq(s.u.u2) + h2_norm_sq(s.theta))


def rescale(s: NonlinearState, epsilon: float) -> NonlinearState:
    if epsilon < 0:
        raise InvalidInputError(f"target norm must be >= 0, got {epsilon}")
    norm = combined_h2_norm(s)
    if norm == 0.0:
        if epsilon == 0.0:
            return s
        raise InvalidInputError("cannot rescale the zero state to a nonzero norm")
    factor = epsilon / norm
    return NonlinearState(s.u * factor, s.theta * factor, s.t)


def band_mask(grid: FrequencyGrid, band: int) -> np.ndarray:
    """Modes with 0 < max(|i1|, |i2|) <= band inside the dealiased range."""
    if band < 1:
        raise InvalidInputError(f"band must be >= 1, got {band}")
    i1 = np.abs(grid.index1)[:, None]
    i2 = np.abs(grid.index2)[None, :]
    return (i1 <= band) & (i2 <= band) & grid.dealias_mask & ~grid.origin_mask


def random_band_field(grid: FrequencyGrid, rng: np.random.Generator, band: int) -> SpectralField:
    """Real Gaussian noise restricted to ``band_mask``; Hermitian by construction."""
    noise = SpectralField.from_physical(grid, rng.standard_normal(grid.shape))
    return noise.multiply(band_mask(grid, band))


def random_solenoidal(
    grid: FrequencyGrid, epsilon: float, rng: np.random.Generator, band: int = 4
) -> NonlinearState:
    """u = perp-gradient of a random stream function, theta random, both band-limited."""
    psi = random_band_field(grid, rng, band)
    theta = random_band_field(grid, rng, band)
    u = perp_gradient(psi)
    y = clean(grid, np.stack([u.u1.coeffs, u.u2.coeffs, theta.coeffs]))
    return rescale(NonlinearState.from_stacked(grid, y), epsilon)


def taylor_green(
    grid: FrequencyGrid,
    epsilon: float,
    modes: Sequence[Sequence[int]] = ((1, 1), (1, 1)),
) -> NonlinearState:
    """psi = sin(a x1/L1) sin(b x2/L2) for the velocity, theta = sin(c x1/L1) sin(d x2/L2)."""
    (a, b), (c, d) = modes
    for k, n in ((a, grid.n1), (b, grid.n2), (c, grid.n1), (d, grid.n2)):
        if k < 1 or k > n / 3:
            raise InvalidInputError(f"mode index {k} outside the dealiased range 1..{n // 3}")
    x1, x2 = grid.x1 / grid.L1, grid.x2 / grid.L2
    psi = SpectralField.from_physical(grid, np.sin(a * x1) * np.sin(b * x2))
    theta = SpectralField.from_physical(grid, np.sin(c * x1) * np.sin(d * x2))
    u = perp_gradient(psi)
    y = clean(grid, np.stack([u.u1.coeffs, u.u2.coeffs, theta.coeffs]))
    return rescale(NonlinearState.from_stacked(grid, y), epsilon)
