"""
Adaptive tensor Gauss-Legendre quadrature on rectangles, and Sobolev norms
of the exact whole-plane linear solution

    u1 = K1 u10 + K2 theta0,  u2 = K1 u20 + K3 theta0,  theta = K4 u20 + K5 theta0

evaluated by integrating |xi|^{2s} |component|^2 over the plane.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from ..errors import InvalidInputError
from ..kernels.symbols import kernel_arrays
from ..models import Params
from .spectra import ClosedFormSpectrum, ContinuumInit

logger = logging.getLogger(__name__)

Component = Literal["u1", "u2", "theta"]
Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]

ORDER = 6
MAX_PANELS = 400_000
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)

# Relative size of the Gaussian tail cut off beyond the integration box.
TAIL = 1e-10


@dataclass(frozen=True)
class QuadratureResult:
    integral: float
    error: float
    panels: int
    converged: bool

    @property
    def value(self) -> float:
        """Square root of the integral, i.e. the norm."""
        return math.sqrt(max(self.integral, 0.0))


def _rule(f: Integrand, rects: np.ndarray) -> np.ndarray:
    x0, x1, y0, y1 = rects.T
    hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    X = (0.5 * (x0 + x1))[:, None, None] + hx[:, None, None] * _NODES[None, :, None]
    Y = (0.5 * (y0 + y1))[:, None, None] + hy[:, None, None] * _NODES[None, None, :]
    vals = np.broadcast_to(f(X, Y), (len(rects), ORDER, ORDER))
    return hx * hy * np.einsum("mij,i,j->m", vals, _WEIGHTS, _WEIGHTS)


def _split(rects: np.ndarray) -> np.ndarray:
    x0, x1, y0, y1 = rects.T
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    children = np.stack(
        [
            np.stack([x0, xm, y0, ym], axis=1),
            np.stack([xm, x1, y0, ym], axis=1),
            np.stack([x0, xm, ym, y1], axis=1),
            np.stack([xm, x1, ym, y1], axis=1),
        ],
        axis=1,
    )
    return children.reshape(-1, 4)


def _estimate(f: Integrand, rects: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    coarse = _rule(f, rects)
    fine = _rule(f, _split(rects)).reshape(-1, 4).sum(axis=1)
    return fine, np.abs(fine - coarse)


def adaptive_quadrature(
    f: Integrand,
    x_breaks: np.ndarray,
    y_breaks: np.ndarray,
    *,
    rtol: float = 1e-6,
    atol: float = 0.0,
    max_panels: int = MAX_PANELS,
) -> QuadratureResult:
    """Integrate ``f`` over the box spanned by the breakpoints.

    The rectangles carrying the largest error estimates are quartered until
    the summed estimate is below max(rtol |I|, atol). Exceeding
    ``max_panels`` rectangles stops the refinement with converged=False.
    """
    xb, yb = np.asarray(x_breaks, dtype=float), np.asarray(y_breaks, dtype=float)
    if xb.size < 2 or yb.size < 2 or np.any(np.diff(xb) <= 0) or np.any(np.diff(yb) <= 0):
        raise InvalidInputError("breakpoints must be strictly increasing with at least two entries")
    gx0, gy0 = np.meshgrid(xb[:-1], yb[:-1], indexing="ij")
    gx1, gy1 = np.meshgrid(xb[1:], yb[1:], indexing="ij")
    rects = np.stack([gx0.ravel(), gx1.ravel(), gy0.ravel(), gy1.ravel()], axis=1)
    est, err = _estimate(f, rects)
    panels = len(rects)
    converged = True
    while True:
        total = float(est.sum())
        tol = max(rtol * abs(total), atol)
        if float(err.sum()) <= tol:
            break
        order = np.argsort(-err)
        remaining = err.sum() - np.cumsum(err[order])
        k = int(np.argmax(remaining <= 0.5 * tol)) + 1
        if panels + 4 * k > max_panels:
            converged = False
            logger.warning(
                "quadrature budget of %d panels exhausted (error %.3e, target %.3e)",
                max_panels,
                float(err.sum()),
                tol,
            )
            break
        chosen = order[:k]
        keep = np.ones(len(rects), dtype=bool)
        keep[chosen] = False
        children = _split(rects[chosen])
        c_est, c_err = _estimate(f, children)
        rects = np.concatenate([rects[keep], children])
        est = np.concatenate([est[keep], c_est])
        err = np.concatenate([err[keep], c_err])
        panels += len(children)
    logger.debug("quadrature: %d panels, integral %.6e", panels, float(est.sum()))
    return QuadratureResult(float(est.sum()), float(err.sum()), panels, converged)


def graded_breaks(extent: float, *, finest: float = 1e-4, count: int = 16) -> np.ndarray:
    """0 followed by geometrically spaced points up to ``extent``."""
    return np.concatenate([[0.0], extent * np.geomspace(finest, 1.0, count)])


def _terms(
    which: Component, init: ContinuumInit
) -> list[tuple[int, ClosedFormSpectrum]]:
    """(kernel index, spectrum) pairs contributing to ``which``."""
    table: dict[str, list[tuple[int, ClosedFormSpectrum | None]]] = {
        "u1": [(1, init.u1), (2, init.theta)],
        "u2": [(1, init.u2), (3, init.theta)],
        "theta": [(4, init.u2), (5, init.theta)],
    }
    if which not in table:
        raise InvalidInputError(f"unknown component {which!r}; expected u1, u2 or theta")
    return [(k, spec) for k, spec in table[which] if spec is not None]


def _parity(index: int, spec: ClosedFormSpectrum) -> tuple[int, int]:
    a, b = spec.parity()
    if index == 2:
        return (a + 1) % 2, (b + 1) % 2
    return a, b


def integration_extent(init: ContinuumInit, s: float) -> float:
    """Half-width of the box outside which the Gaussian tail is below TAIL."""
    specs = [x for x in (init.u1, init.u2, init.theta) if x is not None]
    width = max(x.width for x in specs)
    m = s + max(sum(x.powers) for x in specs)
    return width * math.sqrt(0.5 * (math.log(1.0 / TAIL) + (2.0 * m + 1.0) * math.log(2.0 * m + 3.0) + 4.0))


def norm_by_quadrature(
    which: Component,
    init: ContinuumInit,
    s: float,
    t: float,
    p: Params,
    *,
    rtol: float = 1e-6,
    max_panels: int = MAX_PANELS,
) -> QuadratureResult:
    """||component(t)||_{H^s} (homogeneous) of the whole-plane linear solution."""
    if t < 0:
        raise InvalidInputError(f"time must be >= 0, got {t}")
    if s < 0:
        raise InvalidInputError(f"s must be >= 0, got {s}")
    init.check_divergence_free()
    terms = _terms(which, init)
    if not terms:
        return QuadratureResult(0.0, 0.0, 0, True)
    symmetric = len({_parity(k, spec) for k, spec in terms}) == 1

    def amplitude(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        k = kernel_arrays(x1, x2, t, p)
        total = 0.0
        for index, spec in terms:
            total = total + np.real(k.kernel(index)) * spec(x1, x2)
        return np.asarray(total)

    def integrand(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        weight = (x1**2 + x2**2) ** s
        if symmetric:
            return 4.0 * weight * amplitude(x1, x2) ** 2
        folded = sum(amplitude(a * x1, b * x2) ** 2 for a in (1.0, -1.0) for b in (1.0, -1.0))
        return weight * folded

    breaks = graded_breaks(integration_extent(init, s))
    return adaptive_quadrature(integrand, breaks, breaks, rtol=rtol, max_panels=max_panels)
