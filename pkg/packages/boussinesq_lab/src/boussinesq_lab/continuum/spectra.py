"""
Gaussian-type initial spectra on the whole plane and their exact norms.

Each kind is amplitude * w(xi) * exp(-|xi|^2 / width^2) with a monomial
weight w. The xi1^2 and xi1 xi2 kinds with opposite amplitudes form a
divergence-free velocity pair (u10, u20) = (-xi1 xi2 g, xi1^2 g).
"""

from __future__ import annotations

import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln

from ..errors import InvalidInputError

SpectrumKind = Literal[
    "gaussian",
    "xi1_weighted_gaussian",
    "xi1sq_weighted_gaussian",
    "xi1xi2_weighted_gaussian",
    "xi2_weighted_gaussian",
]

# (power of xi1, power of xi2) in the weight
_POWERS: dict[str, tuple[int, int]] = {
    "gaussian": (0, 0),
    "xi1_weighted_gaussian": (1, 0),
    "xi1sq_weighted_gaussian": (2, 0),
    "xi1xi2_weighted_gaussian": (1, 1),
    "xi2_weighted_gaussian": (0, 1),
}


class ClosedFormSpectrum(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: SpectrumKind = "gaussian"
    width: float = Field(1.0, gt=0)
    amplitude: float = 1.0

    @property
    def powers(self) -> tuple[int, int]:
        return _POWERS[self.kind]

    def __call__(self, xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        a, b = self.powers
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        return self.amplitude * xi1**a * xi2**b * np.exp(-(xi1**2 + xi2**2) / self.width**2)

    def parity(self) -> tuple[int, int]:
        """0 for even, 1 for odd under xi1 -> -xi1 and xi2 -> -xi2."""
        a, b = self.powers
        return a % 2, b % 2

    def supports(self, s: float, sigma: float, axis: int = 1) -> bool:
        """Whether the homogeneous (s, -sigma) norm on the given axis is finite."""
        return _moment_exponents(self, s, sigma, axis) is not None


class ContinuumInit(BaseModel):
    """Initial data (u10, u20, theta0) on the plane; absent entries are zero."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    u1: Optional[ClosedFormSpectrum] = None
    u2: Optional[ClosedFormSpectrum] = None
    theta: Optional[ClosedFormSpectrum] = None

    def check_divergence_free(self, rtol: float = 1e-10) -> None:
        if self.u1 is None and self.u2 is None:
            return
        xi = np.linspace(-2.0, 2.0, 9) + 0.137
        xi1, xi2 = np.meshgrid(xi, xi[::-1] * 0.83, indexing="ij")
        f1 = self.u1(xi1, xi2) if self.u1 is not None else 0.0
        f2 = self.u2(xi1, xi2) if self.u2 is not None else 0.0
        div = np.abs(xi1 * f1 + xi2 * f2)
        scale = np.sqrt(xi1**2 + xi2**2) * np.sqrt(np.abs(f1) ** 2 + np.abs(f2) ** 2)
        if float(div.max()) > rtol * max(float(scale.max()), 1e-300):
            raise InvalidInputError("initial velocity spectra are not divergence-free")


def divergence_free_pair(width: float = 1.0, amplitude: float = 1.0) -> ContinuumInit:
    """(u10, u20) = amplitude * (-xi1 xi2, xi1^2) exp(-|xi|^2 / width^2)."""
    return ContinuumInit(
        u1=ClosedFormSpectrum(kind="xi1xi2_weighted_gaussian", width=width, amplitude=-amplitude),
        u2=ClosedFormSpectrum(kind="xi1sq_weighted_gaussian", width=width, amplitude=amplitude),
    )


def _moment_exponents(
    spec: ClosedFormSpectrum, s: float, sigma: float, axis: int
) -> tuple[float, float, float] | None:
    if axis not in (1, 2):
        raise InvalidInputError(f"axis must be 1 or 2, got {axis}")
    a, b = spec.powers
    alpha, beta = (a - sigma, float(b)) if axis == 1 else (float(a), b - sigma)
    m = s + a + b - sigma
    if alpha <= -0.5 or beta <= -0.5 or m <= -1.0:
        return None
    return alpha, beta, m


def closed_form_norm(
    spec: ClosedFormSpectrum, s: float = 0.0, sigma: float = 0.0, axis: int = 1
) -> float:
    """(int |xi|^{2s} |xi_axis|^{-2 sigma} |spec(xi)|^2 dxi)^{1/2} over the plane.

    Polar coordinates split the integral into a Gamma-function radial
    moment and a Beta-function angular moment. Infinite when the weight is
    not integrable.
    """
    exps = _moment_exponents(spec, s, sigma, axis)
    if exps is None:
        return math.inf
    if spec.amplitude == 0:
        return 0.0
    alpha, beta, m = exps
    w2 = spec.width**2
    # int_0^inf r^{2m+1} exp(-2 r^2 / w^2) dr = (w^2/2)^{m+1} Gamma(m+1) / 2
    log_radial = (m + 1.0) * math.log(w2 / 2.0) + gammaln(m + 1.0) - math.log(2.0)
    # int_0^{2 pi} |cos|^{2 alpha} |sin|^{2 beta} = 2 Gamma(alpha+1/2) Gamma(beta+1/2) / Gamma(alpha+beta+1)
    log_angular = (
        math.log(2.0) + gammaln(alpha + 0.5) + gammaln(beta + 0.5) - gammaln(alpha + beta + 1.0)
    )
    return abs(spec.amplitude) * math.exp(0.5 * (log_radial + log_angular))
