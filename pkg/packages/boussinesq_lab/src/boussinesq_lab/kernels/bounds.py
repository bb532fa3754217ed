"""
Region-wise decay envelopes for K1..K5 and the fitting of their constants.

In S1 the envelopes are heat-like; in S2 they split into a fast
``|xi|^2`` part and a slow anisotropic part. The constants (C, c0) are not
known in closed form, so they are fitted on a sampled (xi1, xi2, t) lattice
and then checked on a refined one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import InvalidInputError, ZeroFrequencyError
from ..models import Params
from .symbols import KernelArrays, in_s1, kernel_arrays, region_tag, Region, symbol_coefficients

logger = logging.getLogger(__name__)

KERNEL_INDICES = (1, 2, 3, 4, 5)
_ZERO_TOL = 1e-14


def envelope_shape(
    index: int,
    xi1: np.ndarray | float,
    xi2: np.ndarray | float,
    t: np.ndarray | float,
    p: Params,
    c0: float,
) -> np.ndarray:
    """Envelope of |K_index| with C = 1, broadcast over (xi1, xi2, t)."""
    if index not in KERNEL_INDICES:
        raise InvalidInputError(f"kernel index must be in 1..5, got {index}")
    x1 = np.asarray(xi1, dtype=float)
    x2 = np.asarray(xi2, dtype=float)
    tt = np.asarray(t, dtype=float)
    s1 = x1**2
    s2 = x2**2
    ksq = s1 + s2
    if np.any(ksq == 0):
        raise ZeroFrequencyError("envelopes are undefined at xi = (0, 0)")
    damping, stiffness = symbol_coefficients(x1, x2, p)
    heat = np.exp(-c0 * ksq * tt)

    if index in (1, 5):
        env_s1 = heat
        env_s2 = np.exp(-0.75 * damping * tt) + np.exp(-(stiffness / damping) * tt)
    else:
        env_s1 = tt * heat
        slow = np.exp(-c0 * (s1 * s2 / ksq) * tt) * np.exp(-c0 * (s1 / ksq**2) * tt)
        mix = heat + slow
        if index == 2:
            weight = np.sqrt(s1 * s2) / ksq**2
        elif index == 3:
            weight = s1 / ksq**2
        else:
            weight = 1.0 / ksq
        env_s2 = weight * mix

    return np.where(in_s1(x1, x2, p), env_s1, env_s2)


def kernel_envelope(
    index: int,
    xi1: np.ndarray | float,
    xi2: np.ndarray | float,
    t: np.ndarray | float,
    p: Params,
    C: float,
    c0: float,
) -> np.ndarray:
    return C * envelope_shape(index, xi1, xi2, t, p, c0)


def _ratios(kernels: KernelArrays, index: int, shape: np.ndarray) -> np.ndarray:
    mag = np.abs(kernels.kernel(index))
    pos = shape > 0
    out = np.zeros(np.broadcast(mag, shape).shape)
    np.divide(mag, shape, out=out, where=pos)
    # A vanished envelope only admits a vanished kernel.
    out = np.where(~pos & (mag > _ZERO_TOL), np.inf, out)
    return out


@dataclass(frozen=True)
class EnvelopeCheck:
    xi: tuple[float, float]
    t: float
    region: Region
    holds: dict[str, bool]
    ratios: dict[str, float]

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())


def verify_kernel_envelopes(
    xi: Sequence[float], t: float, p: Params, constants: tuple[float, float]
) -> EnvelopeCheck:
    C, c0 = float(constants[0]), float(constants[1])
    if C <= 0 or c0 <= 0:
        raise InvalidInputError(f"envelope constants must be positive, got C={C}, c0={c0}")
    if t < 0:
        raise InvalidInputError("verify_kernel_envelopes requires t >= 0")
    xi1, xi2 = float(xi[0]), float(xi[1])
    k = kernel_arrays(xi1, xi2, t, p)
    holds: dict[str, bool] = {}
    ratios: dict[str, float] = {}
    for i in KERNEL_INDICES:
        shape = envelope_shape(i, xi1, xi2, t, p, c0)
        r = float(_ratios(k, i, shape))
        ratios[f"K{i}"] = r
        holds[f"K{i}"] = r <= C * (1.0 + 1e-12)
    return EnvelopeCheck(
        xi=(xi1, xi2), t=float(t), region=region_tag((xi1, xi2), p), holds=holds, ratios=ratios
    )


@dataclass(frozen=True)
class EnvelopeFit:
    C: float
    c0: float
    per_kernel: dict[str, float]
    feasible: bool
    points: int
    candidates: list[tuple[float, float]] = field(default_factory=list)


def _lattice(
    xi1_values: Sequence[float], xi2_values: Sequence[float], t_values: Sequence[float]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x1 = np.asarray(xi1_values, dtype=float)
    x2 = np.asarray(xi2_values, dtype=float)
    tt = np.asarray(t_values, dtype=float)
    if np.any(tt < 0):
        raise InvalidInputError("lattice times must be >= 0")
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    keep = (X1**2 + X2**2) > 0
    return X1[keep][:, None], X2[keep][:, None], tt[None, :]


def _max_ratios(
    kernels: KernelArrays,
    X1: np.ndarray,
    X2: np.ndarray,
    T: np.ndarray,
    p: Params,
    c0: float,
) -> dict[str, float]:
    out: dict[str, float] = {}
    for i in KERNEL_INDICES:
        shape = envelope_shape(i, X1, X2, T, p, c0)
        out[f"K{i}"] = float(_ratios(kernels, i, shape).max(initial=0.0))
    return out


def fit_envelope_constants(
    xi1_values: Sequence[float],
    xi2_values: Sequence[float],
    t_values: Sequence[float],
    p: Params,
    *,
    c0_candidates: Sequence[float] | None = None,
    safety: float = 2.0,
    c_max: float = 1e3,
    backoff: float = 0.5,
) -> EnvelopeFit:
    """Fit (C, c0) so that |K_i| <= C * envelope_i on the whole lattice.

    For every candidate c0 the minimal C is the largest |K_i| / envelope
    ratio over the lattice. The largest c0 whose C (times ``safety``) stays
    within ``c_max`` is then scaled by ``backoff`` and C recomputed there, so
    the fitted envelope is not tight against points between lattice nodes.
    """
    if safety < 1.0:
        raise InvalidInputError(f"safety factor must be >= 1, got {safety}")
    if not 0.0 < backoff <= 1.0:
        raise InvalidInputError(f"backoff must lie in (0, 1], got {backoff}")
    X1, X2, T = _lattice(xi1_values, xi2_values, t_values)
    kernels = kernel_arrays(X1, X2, T, p)
    cands = np.sort(
        np.asarray(
            c0_candidates if c0_candidates is not None else np.geomspace(2e-3, 2.0, 60),
            dtype=float,
        )
    )
    table: list[tuple[float, float]] = []
    best: float | None = None
    fallback: tuple[float, float] | None = None
    for c0 in cands:
        per = _max_ratios(kernels, X1, X2, T, p, float(c0))
        C = safety * max(max(per.values()), 1.0)
        table.append((float(c0), C))
        if fallback is None or C < fallback[1]:
            fallback = (float(c0), C)
        if np.isfinite(C) and C <= c_max:
            best = float(c0)

    feasible = best is not None
    if best is not None:
        c0 = best * backoff
    else:
        assert fallback is not None
        c0 = fallback[0]
    per = _max_ratios(kernels, X1, X2, T, p, c0)
    C = safety * max(max(per.values()), 1.0)
    if not feasible:
        logger.warning("no envelope constant pair with C <= %g; best C=%g at c0=%g", c_max, C, c0)
    else:
        logger.debug("envelope fit nu=%g eta=%g: C=%g c0=%g", p.nu, p.eta, C, c0)
    return EnvelopeFit(
        C=C,
        c0=c0,
        per_kernel={k: safety * v for k, v in per.items()},
        feasible=feasible and C <= c_max,
        points=int(X1.size * T.size),
        candidates=table,
    )


def refine_values(values: Sequence[float], factor: int = 2) -> np.ndarray:
    """Insert ``factor - 1`` equispaced points between neighbouring samples."""
    v = np.asarray(values, dtype=float)
    if v.size < 2 or factor <= 1:
        return v.copy()
    n = (v.size - 1) * factor + 1
    return np.interp(np.linspace(0, v.size - 1, n), np.arange(v.size), v)


@dataclass(frozen=True)
class EnvelopeValidation:
    points: int
    violations: int
    max_ratio: float
    worst: dict[str, float]

    @property
    def holds(self) -> bool:
        return self.violations == 0


def validate_envelope(
    fit: EnvelopeFit,
    xi1_values: Sequence[float],
    xi2_values: Sequence[float],
    t_values: Sequence[float],
    p: Params,
) -> EnvelopeValidation:
    X1, X2, T = _lattice(xi1_values, xi2_values, t_values)
    kernels = kernel_arrays(X1, X2, T, p)
    violations = 0
    worst: dict[str, float] = {}
    for i in KERNEL_INDICES:
        shape = envelope_shape(i, X1, X2, T, p, fit.c0)
        ratios = _ratios(kernels, i, shape)
        violations += int(np.count_nonzero(ratios > fit.C * (1.0 + 1e-12)))
        worst[f"K{i}"] = float(ratios.max(initial=0.0))
    return EnvelopeValidation(
        points=int(X1.size * T.size),
        violations=violations,
        max_ratio=max(worst.values()) / fit.C,
        worst=worst,
    )
