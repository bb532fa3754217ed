"""
Algebraic decay envelopes of the whole-plane linear solution.

For s, sigma >= 0 with s + sigma >= 2, each component is bounded by a sum
of power laws C t^e times homogeneous anisotropic norms of the data. The
report measures the component norm by quadrature, fits non-negative
constants in front of the predicted powers on the first half of the time
window and checks the second half stays below the fitted envelope.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import nnls

from ..diagnostics.fitting import fit_decay_rate
from ..errors import HypothesisError, InvalidInputError
from ..models import Params
from .quadrature import MAX_PANELS, Component, QuadratureResult, norm_by_quadrature
from .spectra import ClosedFormSpectrum, ContinuumInit, closed_form_norm

logger = logging.getLogger(__name__)

NO_DECAY = "no decay guaranteed"
REPORT_COLUMNS = ["case", "s", "sigma", "t", "measured_norm", "envelope_value", "dominant_exponent"]


class DecayCase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "theta-xi1sq"
    component: Component = "theta"
    s: float = Field(0.0, ge=0)
    sigma: float = Field(2.0, ge=0)
    init: ContinuumInit = Field(
        default_factory=lambda: ContinuumInit(theta=ClosedFormSpectrum(kind="xi1sq_weighted_gaussian"))
    )


@dataclass(frozen=True)
class EnvelopeTerm:
    exponent: float
    source: str
    # Sobolev order s' of the data norm H^{s', -sigma}
    order: float


def predicted_terms(component: Component, s: float, sigma: float) -> list[EnvelopeTerm]:
    """Power laws bounding ||component(t)||_{H^s}, with the data norm each one consumes."""
    base = -0.5 * (s + sigma)
    half = -0.5 * sigma
    if component == "u1":
        return [
            EnvelopeTerm(base, "u1", 0.0),
            EnvelopeTerm(half, "u1", s),
            EnvelopeTerm(base + 1.0, "theta", 0.0),
            EnvelopeTerm(half - 0.5, "theta", s - 1.0),
        ]
    if component == "u2":
        return [
            EnvelopeTerm(base, "u2", 0.0),
            EnvelopeTerm(half, "u2", s),
            EnvelopeTerm(base + 1.0, "theta", 0.0),
            EnvelopeTerm(half - 1.0, "theta", s),
        ]
    if component == "theta":
        return [
            EnvelopeTerm(base + 1.0, "u2", 0.0),
            EnvelopeTerm(half, "u2", s - 2.0),
            EnvelopeTerm(base, "theta", 0.0),
            EnvelopeTerm(half, "theta", s),
        ]
    raise InvalidInputError(f"unknown component {component!r}")


def check_hypotheses(case: DecayCase) -> list[EnvelopeTerm]:
    """Terms whose data is present; HypothesisError when s + sigma < 2 or a data norm is infinite."""
    if case.s + case.sigma < 2:
        raise HypothesisError(
            f"decay envelopes need s + sigma >= 2, got s={case.s}, sigma={case.sigma}",
            meta={"s": case.s, "sigma": case.sigma},
        )
    terms = []
    for term in predicted_terms(case.component, case.s, case.sigma):
        spec = getattr(case.init, term.source)
        if spec is None:
            continue
        if not math.isfinite(closed_form_norm(spec, term.order, case.sigma, axis=1)):
            raise HypothesisError(
                f"{term.source} data of kind {spec.kind} has infinite "
                f"H^({term.order}, -{case.sigma}) norm",
                meta={"source": term.source, "order": term.order},
            )
        terms.append(term)
    return terms


@dataclass
class DecayReport:
    case: DecayCase
    times: np.ndarray
    measured: np.ndarray
    envelope: np.ndarray
    exponents: np.ndarray
    coefficients: np.ndarray
    predicted_exponent: float
    dominant_exponent: float
    slope: float
    r2: float
    holds: bool
    converged: bool
    flags: list[str] = field(default_factory=list)

    def rows(self) -> list[dict[str, Any]]:
        return [
            {
                "case": self.case.name,
                "s": self.case.s,
                "sigma": self.case.sigma,
                "t": float(t),
                "measured_norm": float(m),
                "envelope_value": float(e),
                "dominant_exponent": self.dominant_exponent,
            }
            for t, m, e in zip(self.times, self.measured, self.envelope)
        ]


def _fit_envelope(
    times: np.ndarray, measured: np.ndarray, exponents: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Non-negative coefficients fitted in relative error on the first half, lifted to an upper bound there."""
    half = max(len(times) // 2, 1)
    t_fit, m_fit = times[:half], measured[:half]
    basis = t_fit[:, None] ** exponents[None, :]
    scale = np.where(m_fit > 0, 1.0 / np.maximum(m_fit, 1e-300), 1.0)
    coef, _ = nnls(basis * scale[:, None], m_fit * scale)
    if not np.any(coef > 0):
        coef = np.zeros_like(exponents)
        coef[np.argmax(exponents)] = 1.0
    fitted = basis @ coef
    lift = float(np.max(m_fit / fitted)) if np.all(fitted > 0) else 1.0
    coef = coef * max(lift, 1.0)
    return coef, (times[:, None] ** exponents[None, :]) @ coef


def decay_report(
    case: DecayCase,
    times: Sequence[float],
    p: Params,
    *,
    rtol: float = 1e-6,
    max_panels: int = MAX_PANELS,
    workers: int = 1,
) -> DecayReport:
    terms = check_hypotheses(case)
    t = np.asarray(times, dtype=float)
    if t.size < 2 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InvalidInputError("times must be positive and strictly increasing")
    if not terms:
        raise InvalidInputError(f"case {case.name!r} has no data feeding component {case.component}")

    def measure(tk: float) -> QuadratureResult:
        return norm_by_quadrature(case.component, case.init, case.s, tk, p, rtol=rtol, max_panels=max_panels)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(measure, t))
    measured = np.array([r.value for r in results])
    converged = all(r.converged for r in results)

    exponents = np.array(sorted({term.exponent for term in terms}))
    coef, envelope = _fit_envelope(t, measured, exponents)
    half = max(len(t) // 2, 1)
    holds = bool(np.all(measured[half:] <= envelope[half:] * (1.0 + 1e-9)))

    contributions = coef * t[-1] ** exponents
    dominant = float(exponents[int(np.argmax(contributions))])
    predicted = float(exponents.max())
    flags: list[str] = []
    if predicted >= 0:
        flags.append(NO_DECAY)
    if not converged:
        flags.append("quadrature not converged")
    if not holds:
        logger.warning("case %s: measured norm exceeds the fitted envelope", case.name)

    if np.all(measured > 0) and len(t) >= 10:
        fit = fit_decay_rate(t, measured, mode="algebraic")
        slope, r2 = fit.slope, fit.r2
    else:
        slope, r2 = math.nan, math.nan
    return DecayReport(
        case=case,
        times=t,
        measured=measured,
        envelope=envelope,
        exponents=exponents,
        coefficients=coef,
        predicted_exponent=predicted,
        dominant_exponent=dominant,
        slope=slope,
        r2=r2,
        holds=holds,
        converged=converged,
        flags=flags,
    )
