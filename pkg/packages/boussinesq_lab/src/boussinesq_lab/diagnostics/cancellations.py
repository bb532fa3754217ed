"""Integrals that vanish identically for divergence-free velocity fields."""

from __future__ import annotations

from dataclasses import dataclass

from ..spectral import SpectralField, VectorField, curl, derivative, gradient, inner_product


@dataclass(frozen=True)
class Cancellation:
    value: float
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.scale if self.scale > 0 else 0.0


def _grad_inner(f: SpectralField, g: SpectralField) -> float:
    gf, gg = gradient(f), gradient(g)
    return inner_product(gf.u1, gg.u1) + inner_product(gf.u2, gg.u2)


def _odd_laplacian(f: SpectralField) -> SpectralField:
    # Symbol of div grad with the Nyquist-zeroed first-order wavenumbers.
    return f.multiply(-f.grid.kodd_sq)


def cancellation_I1(u: VectorField, theta: SpectralField) -> Cancellation:
    """(d1 theta, omega) - (grad u2, grad theta)."""
    a = inner_product(derivative(theta, 1), curl(u))
    b = _grad_inner(u.u2, theta)
    return Cancellation(a - b, max(abs(a), abs(b)))


def cancellation_J1(u: VectorField, theta: SpectralField) -> Cancellation:
    """(grad d1 theta, grad omega) - (lap u2, lap theta).

    Both sides use the odd-order wavenumbers, so the value vanishes for any
    field that is divergence-free in that sense, Nyquist lines included.
    """
    a = _grad_inner(derivative(theta, 1), curl(u))
    b = inner_product(_odd_laplacian(u.u2), _odd_laplacian(theta))
    return Cancellation(a - b, max(abs(a), abs(b)))
