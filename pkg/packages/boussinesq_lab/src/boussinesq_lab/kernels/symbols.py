"""
Characteristic roots, wave kernels G1/G2 and the solution kernels K1..K5.

Per frequency xi the linearized system reduces to the damped wave equation

    f'' + p f' + q f = 0,   p = eta xi1^2 + nu xi2^2,
                            q = nu eta xi1^2 xi2^2 + xi1^2 / |xi|^2,

satisfied by u1, u2 and theta alike. Everything here is vectorised over
broadcastable arrays of xi1, xi2 and t; scalar wrappers sit on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import InvalidInputError, ZeroFrequencyError
from ..models import Params

EPS_DEG = 1e-6
_SINHC_SERIES = 1e-3


class Region(str, Enum):
    S11 = "S11"
    S12 = "S12"
    S21 = "S21"
    S22 = "S22"
    AXIS1 = "AXIS1"
    ZERO = "ZERO"


REGION_CODES: tuple[Region, ...] = (Region.S11, Region.S12, Region.S21, Region.S22)


@dataclass(frozen=True)
class KernelArrays:
    lambda1: np.ndarray
    lambda2: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    K3: np.ndarray
    K4: np.ndarray
    K5: np.ndarray

    def kernel(self, index: int) -> np.ndarray:
        if index not in (1, 2, 3, 4, 5):
            raise InvalidInputError(f"kernel index must be in 1..5, got {index}")
        return getattr(self, f"K{index}")


@dataclass(frozen=True)
class KernelEval:
    xi: tuple[float, float]
    t: float
    lambda1: complex
    lambda2: complex
    G1: complex
    G2: complex
    K1: complex
    K2: complex
    K3: complex
    K4: complex
    K5: complex
    region: Region

    @property
    def K(self) -> tuple[complex, complex, complex, complex, complex]:
        return (self.K1, self.K2, self.K3, self.K4, self.K5)


def _as_xi(xi: Sequence[float]) -> tuple[float, float]:
    xi1, xi2 = (float(xi[0]), float(xi[1]))
    if xi1 == 0.0 and xi2 == 0.0:
        raise ZeroFrequencyError("operation undefined at xi = (0, 0)")
    return xi1, xi2


def symbol_coefficients(
    xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params
) -> tuple[np.ndarray, np.ndarray]:
    """Damping p(xi) and stiffness q(xi) of the per-mode wave equation."""
    s1 = np.square(np.asarray(xi1, dtype=float))
    s2 = np.square(np.asarray(xi2, dtype=float))
    ksq = s1 + s2
    ratio = np.divide(s1, ksq, out=np.zeros(np.broadcast(s1, s2).shape), where=ksq > 0)
    damping = p.eta * s1 + p.nu * s2
    stiffness = p.nu * p.eta * s1 * s2 + ratio
    return damping, stiffness


def roots_from_coefficients(
    damping: np.ndarray, stiffness: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Roots of lambda^2 + p lambda + q = 0 with Re lambda1 <= Re lambda2.

    Real roots use lambda2 = q / lambda1 to avoid cancellation when q << p^2;
    complex roots are returned with lambda1 in the lower half-plane.
    """
    damping = np.asarray(damping, dtype=float)
    stiffness = np.asarray(stiffness, dtype=float)
    disc = damping**2 - 4.0 * stiffness
    real = disc >= 0
    root = np.sqrt(np.abs(disc))
    l1_real = -0.5 * (damping + root)
    l2_real = np.divide(stiffness, l1_real, out=np.zeros_like(l1_real), where=l1_real != 0)
    l1 = np.where(real, l1_real + 0j, -0.5 * damping - 0.5j * root)
    l2 = np.where(real, l2_real + 0j, -0.5 * damping + 0.5j * root)
    return l1, l2


def char_roots_array(
    xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params
) -> tuple[np.ndarray, np.ndarray]:
    return roots_from_coefficients(*symbol_coefficients(xi1, xi2, p))


def char_roots(xi: Sequence[float], p: Params) -> tuple[complex, complex]:
    xi1, xi2 = _as_xi(xi)
    l1, l2 = char_roots_array(xi1, xi2, p)
    return complex(l1), complex(l2)


def _sinhc(z: np.ndarray) -> np.ndarray:
    small = np.abs(z) < _SINHC_SERIES
    z2 = z * z
    series = 1.0 + z2 / 6.0 + z2 * z2 / 120.0
    safe = np.where(small, 1.0, z)
    return np.where(small, series, np.sinh(safe) / safe)


def g_functions(
    lambda1: np.ndarray | complex,
    lambda2: np.ndarray | complex,
    t: np.ndarray | float,
    *,
    eps_deg: float = EPS_DEG,
) -> tuple[np.ndarray, np.ndarray]:
    """Fundamental solutions of the wave equation with G1(0)=0, G1'(0)=1 and G2(0)=1, G2'(0)=0.

    Divided differences when |lambda1 - lambda2| > eps_deg * max(1, |lambda1|, |lambda2|);
    otherwise G1 = t e^{m t} sinhc(d t / 2) and G2 = e^{m t}(cosh(d t / 2) - m t sinhc(d t / 2))
    with m the mean root and d the root gap. Both branches satisfy
    G2 = e^{lambda1 t} - lambda1 G1.
    """
    l1 = np.asarray(lambda1, dtype=np.complex128)
    l2 = np.asarray(lambda2, dtype=np.complex128)
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise InvalidInputError("g_functions requires t >= 0")
    gap = l1 - l2
    scale = np.maximum(1.0, np.maximum(np.abs(l1), np.abs(l2)))
    degenerate = np.abs(gap) <= eps_deg * scale

    safe_gap = np.where(degenerate, 1.0, gap)
    e1 = np.exp(l1 * tt)
    e2 = np.exp(l2 * tt)
    g1_div = (e1 - e2) / safe_gap
    g2_div = (l1 * e2 - l2 * e1) / safe_gap

    mean = 0.5 * (l1 + l2)
    z = 0.5 * gap * tt
    em = np.exp(mean * tt)
    shc = _sinhc(z)
    g1_deg = tt * em * shc
    g2_deg = em * (np.cosh(z) - mean * tt * shc)

    G1 = np.where(degenerate, g1_deg, g1_div)
    G2 = np.where(degenerate, g2_deg, g2_div)
    if G1.ndim == 0:
        return complex(G1), complex(G2)  # type: ignore[return-value]
    return G1, G2


def kernel_arrays(
    xi1: np.ndarray | float,
    xi2: np.ndarray | float,
    t: np.ndarray | float,
    p: Params,
    *,
    eps_deg: float = EPS_DEG,
) -> KernelArrays:
    """K1..K5 on broadcastable (xi1, xi2, t) arrays. xi = 0 is rejected."""
    x1 = np.asarray(xi1, dtype=float)
    x2 = np.asarray(xi2, dtype=float)
    ksq = x1**2 + x2**2
    if np.any(ksq == 0):
        raise ZeroFrequencyError("kernel symbols are undefined at xi = (0, 0)")
    damping, stiffness = symbol_coefficients(x1, x2, p)
    l1, l2 = roots_from_coefficients(damping, stiffness)
    G1, G2 = g_functions(l1, l2, t, eps_deg=eps_deg)
    G1 = np.asarray(G1)
    G2 = np.asarray(G2)
    c12 = x1 * x2 / ksq
    c11 = x1**2 / ksq
    return KernelArrays(
        lambda1=l1,
        lambda2=l2,
        G1=G1,
        G2=G2,
        K1=G2 - p.nu * x2**2 * G1,
        K2=-c12 * G1,
        K3=c11 * G1,
        K4=-G1,
        K5=G2 - p.eta * x1**2 * G1,
    )


def kernel_symbols(xi: Sequence[float], t: float, p: Params) -> KernelEval:
    xi1, xi2 = _as_xi(xi)
    if t < 0:
        raise InvalidInputError("kernel_symbols requires t >= 0")
    k = kernel_arrays(xi1, xi2, t, p)
    return KernelEval(
        xi=(xi1, xi2),
        t=float(t),
        lambda1=complex(k.lambda1),
        lambda2=complex(k.lambda2),
        G1=complex(k.G1),
        G2=complex(k.G2),
        K1=complex(k.K1),
        K2=complex(k.K2),
        K3=complex(k.K3),
        K4=complex(k.K4),
        K5=complex(k.K5),
        region=classify_region((xi1, xi2), p),
    )


def in_s1(xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params) -> np.ndarray:
    damping, stiffness = symbol_coefficients(xi1, xi2, p)
    return stiffness >= (3.0 / 16.0) * damping**2


def region_codes(xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params) -> np.ndarray:
    """Index into REGION_CODES for every frequency (xi = 0 must be excluded)."""
    x1 = np.asarray(xi1, dtype=float)
    x2 = np.asarray(xi2, dtype=float)
    damping, stiffness = symbol_coefficients(x1, x2, p)
    s1 = stiffness >= (3.0 / 16.0) * damping**2
    s11 = damping**2 >= 4.0 * stiffness
    s21 = np.abs(x1) >= np.abs(x2)
    return np.where(s1, np.where(s11, 0, 1), np.where(s21, 2, 3))


def classify_region(xi: Sequence[float], p: Params) -> Region:
    xi1, xi2 = _as_xi(xi)
    return REGION_CODES[int(region_codes(xi1, xi2, p))]


def region_tag(xi: Sequence[float], p: Params) -> Region:
    """classify_region extended with the ZERO and AXIS1 tags."""
    xi1, xi2 = float(xi[0]), float(xi[1])
    if xi1 == 0.0 and xi2 == 0.0:
        return Region.ZERO
    if xi1 == 0.0:
        return Region.AXIS1
    return classify_region((xi1, xi2), p)


def vieta_residuals(
    xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params
) -> tuple[np.ndarray, np.ndarray]:
    """Relative residuals of lambda1 + lambda2 = -p and lambda1 lambda2 = q."""
    damping, stiffness = symbol_coefficients(xi1, xi2, p)
    l1, l2 = roots_from_coefficients(damping, stiffness)
    sum_res = np.abs(l1 + l2 + damping) / np.maximum(damping, 1e-300)
    prod_scale = np.maximum(np.maximum(stiffness, np.abs(l1) * np.abs(l2)), 1e-300)
    prod_res = np.abs(l1 * l2 - stiffness) / prod_scale
    return sum_res, prod_res


def root_bounds_hold(
    xi1: np.ndarray | float, xi2: np.ndarray | float, p: Params
) -> np.ndarray:
    """Region-appropriate root inequalities, vectorised.

    S1: Re lambda1 <= -p/2 and Re lambda2 <= -p/4.
    S2: lambda1 <= -3p/4 and lambda2 <= -q/p.
    Slack is 1e-10 * max(1, p).
    """
    damping, stiffness = symbol_coefficients(xi1, xi2, p)
    l1, l2 = roots_from_coefficients(damping, stiffness)
    slack = 1e-10 * np.maximum(1.0, damping)
    s1 = stiffness >= (3.0 / 16.0) * damping**2
    ok_s1 = (l1.real <= -0.5 * damping + slack) & (l2.real <= -0.25 * damping + slack)
    ratio = np.divide(stiffness, damping, out=np.zeros_like(damping), where=damping > 0)
    ok_s2 = (
        (np.abs(l1.imag) <= slack)
        & (np.abs(l2.imag) <= slack)
        & (l1.real <= -0.75 * damping + slack)
        & (l2.real <= -ratio + slack)
    )
    return np.where(s1, ok_s1, ok_s2)


def verify_root_bounds(xi: Sequence[float], p: Params) -> bool:
    xi1, xi2 = _as_xi(xi)
    return bool(root_bounds_hold(xi1, xi2, p))
