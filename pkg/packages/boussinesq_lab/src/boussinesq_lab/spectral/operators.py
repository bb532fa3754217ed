"""
Fourier multipliers, projection, dealiasing and (anisotropic) Sobolev norms.

Conventions:
    - first-order multipliers use wavenumbers with the Nyquist entry zeroed,
      so odd-order derivatives, divergence, curl and the Leray projection
      keep real fields real;
    - inverse Laplacian, Riesz transforms and the gradient part of the
      projection act as 0 on xi = 0 (perturbations are mean-free);
    - norms weight amplitudes by ``grid.cellweight`` (discrete Plancherel).
"""

from __future__ import annotations

import numpy as np

from ..errors import GridError, InvalidInputError, SingularWeightError
from .fields import SpectralField, VectorField
from .grid import FrequencyGrid


def _axis_wavenumbers(grid: FrequencyGrid, axis: int, odd: bool) -> np.ndarray:
    if axis == 1:
        return grid.xi1_odd if odd else grid.xi1
    if axis == 2:
        return grid.xi2_odd if odd else grid.xi2
    raise InvalidInputError(f"axis must be 1 or 2, got {axis}")


def derivative(f: SpectralField, axis: int, order: int = 1) -> SpectralField:
    if order < 1:
        raise InvalidInputError(f"derivative order must be >= 1, got {order}")
    k = _axis_wavenumbers(f.grid, axis, odd=bool(order % 2))
    return f.multiply((1j * k) ** order)


def laplacian(f: SpectralField) -> SpectralField:
    return f.multiply(-f.grid.ksq)


def inverse_laplacian(f: SpectralField) -> SpectralField:
    return f.multiply(-f.grid.inv_ksq)


def riesz(f: SpectralField, axis: int) -> SpectralField:
    """Riesz transform with symbol xi_axis / |xi| (0 at the origin)."""
    grid = f.grid
    k = _axis_wavenumbers(grid, axis, odd=True)
    return f.multiply(k * np.sqrt(grid.inv_ksq))


def dealias(f: SpectralField) -> SpectralField:
    return f.multiply(f.grid.dealias_mask)


def dealias_vector(v: VectorField) -> VectorField:
    return VectorField(dealias(v.u1), dealias(v.u2), solenoidal=v.solenoidal)


def divergence(v: VectorField) -> SpectralField:
    grid = v.grid
    return SpectralField._wrap(
        grid, 1j * grid.xi1_odd * v.u1.coeffs + 1j * grid.xi2_odd * v.u2.coeffs
    )


def curl(v: VectorField) -> SpectralField:
    """Scalar vorticity d1 u2 - d2 u1."""
    grid = v.grid
    return SpectralField._wrap(
        grid, 1j * grid.xi1_odd * v.u2.coeffs - 1j * grid.xi2_odd * v.u1.coeffs
    )


def perp_gradient(psi: SpectralField) -> VectorField:
    """u = (-d2 psi, d1 psi); then curl(u) = laplacian(psi)."""
    grid = psi.grid
    u1 = SpectralField._wrap(grid, -1j * grid.xi2_odd * psi.coeffs)
    u2 = SpectralField._wrap(grid, 1j * grid.xi1_odd * psi.coeffs)
    return VectorField(u1, u2, solenoidal=True)


def gradient(f: SpectralField) -> VectorField:
    return VectorField(derivative(f, 1), derivative(f, 2))


def leray_project(v: VectorField) -> VectorField:
    """Helmholtz-Leray projection I - xi xi^T / |xi|^2 applied mode-wise.

    The xi = 0 mode passes through unchanged. Callers that need a mean-free
    field zero it themselves; the solver does so through ``nonlinear.clean``.
    """
    grid = v.grid
    if v.u1.grid != v.u2.grid:
        raise GridError("vector components live on different grids")
    k1, k2 = grid.xi1_odd, grid.xi2_odd
    a, b = v.u1.coeffs, v.u2.coeffs
    proj = (k1 * a + k2 * b) * grid.inv_kodd_sq
    return VectorField(
        SpectralField._wrap(grid, a - k1 * proj),
        SpectralField._wrap(grid, b - k2 * proj),
        solenoidal=True,
    )


def divergence_ratio(v: VectorField) -> float:
    """max_xi |xi . v(xi)| / max_xi |xi| |v(xi)|; 0 for the zero field."""
    grid = v.grid
    div = np.abs(grid.xi1_odd * v.u1.coeffs + grid.xi2_odd * v.u2.coeffs)
    scale = np.sqrt(grid.kodd_sq) * np.sqrt(np.abs(v.u1.coeffs) ** 2 + np.abs(v.u2.coeffs) ** 2)
    top = float(scale.max(initial=0.0))
    if top == 0.0:
        return 0.0
    return float(div.max(initial=0.0)) / top


def pointwise_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Dealiased product f*g formed in physical space."""
    if f.grid != g.grid:
        raise GridError("fields live on different grids")
    return dealias(SpectralField.from_physical(f.grid, f.to_physical() * g.to_physical()))


# norms and inner products


def inner_product(f: SpectralField, g: SpectralField) -> float:
    if f.grid != g.grid:
        raise GridError("fields live on different grids")
    return float(f.grid.cellweight * np.real(np.vdot(g.coeffs, f.coeffs)))


def _weighted_sq(f: SpectralField, weight: np.ndarray | float) -> float:
    return float(f.grid.cellweight * np.sum(weight * np.abs(f.coeffs) ** 2))


def l2_norm_sq(f: SpectralField) -> float:
    return _weighted_sq(f, 1.0)


def l2_norm(f: SpectralField) -> float:
    return float(np.sqrt(l2_norm_sq(f)))


def h1_norm_sq(f: SpectralField) -> float:
    return _weighted_sq(f, 1.0 + f.grid.ksq)


def h1_norm(f: SpectralField) -> float:
    return float(np.sqrt(h1_norm_sq(f)))


def h2_norm_sq(f: SpectralField) -> float:
    """||f||^2 + ||grad f||^2 + ||lap f||^2."""
    ksq = f.grid.ksq
    return _weighted_sq(f, 1.0 + ksq + ksq**2)


def h2_norm(f: SpectralField) -> float:
    return float(np.sqrt(h2_norm_sq(f)))


def vector_norm_sq(v: VectorField, norm_sq=l2_norm_sq) -> float:
    return norm_sq(v.u1) + norm_sq(v.u2)


def physical_l2_norm(f: SpectralField) -> float:
    values = f.to_physical()
    return float(np.sqrt(np.sum(values**2) * f.grid.cell_area))


def aniso_weight(
    grid: FrequencyGrid, s: float, sigma: float, axis: int
) -> tuple[np.ndarray, np.ndarray]:
    """|xi|^{2s} |xi_axis|^{-2 sigma} and the mask of modes where it is singular."""
    k_axis = np.abs(_axis_wavenumbers(grid, axis, odd=False))
    ksq = grid.ksq
    singular = np.zeros(grid.shape, dtype=bool)
    weight = np.ones(grid.shape)
    if s != 0:
        pos = ksq > 0
        w_s = np.zeros_like(ksq)
        np.power(ksq, s, out=w_s, where=pos)
        if s < 0:
            singular |= ~pos
        weight = w_s
    if sigma != 0:
        pos = k_axis > 0
        w_sigma = np.zeros_like(k_axis)
        np.power(k_axis, -2.0 * sigma, out=w_sigma, where=pos)
        if sigma > 0:
            singular |= ~pos
        weight = weight * w_sigma
    return weight, singular


def aniso_norm(
    f: SpectralField,
    s: float,
    sigma: float,
    axis: int = 1,
    *,
    atol: float | None = None,
) -> float:
    """( sum |xi|^{2s} |xi_axis|^{-2 sigma} |f(xi)|^2 cellweight )^{1/2}.

    Amplitude on a mode where the weight is singular raises
    SingularWeightError; ``atol`` defaults to 1e-13 times the largest
    amplitude so FFT round-off on those modes is tolerated.
    """
    weight, singular = aniso_weight(f.grid, s, sigma, axis)
    amp = np.abs(f.coeffs)
    if singular.any():
        limit = 1e-13 * float(amp.max(initial=0.0)) if atol is None else atol
        bad = singular & (amp > limit)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise SingularWeightError(
                f"nonzero amplitude on a singular mode of the (s={s}, sigma={sigma}, axis={axis}) weight",
                meta={"index": (int(f.grid.index1[i]), int(f.grid.index2[j]))},
            )
    weight = np.where(singular, 0.0, weight)
    return float(np.sqrt(f.grid.cellweight * np.sum(weight * amp**2)))


def aniso_norm_both(f: SpectralField, s: float, sigma: float) -> float:
    """Sum of the xi1- and xi2-weighted anisotropic norms."""
    return aniso_norm(f, s, sigma, 1) + aniso_norm(f, s, sigma, 2)
