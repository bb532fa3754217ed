from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.stats import linregress

from ..errors import InvalidInputError

FitMode = Literal["algebraic", "exponential"]

MIN_SAMPLES = 10


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r2: float
    mode: FitMode
    samples: int


def default_window(times: Sequence[float]) -> tuple[float, float]:
    """Skips the transient t < 1 and the last 10% of the horizon."""
    t_end = float(np.max(times))
    return 1.0, 0.9 * t_end


def fit_decay_rate(
    times: Sequence[float],
    values: Sequence[float],
    window: tuple[float, float] | None = None,
    mode: FitMode = "algebraic",
) -> DecayFit:
    """Least squares on log(value) against log(t) (algebraic) or t (exponential)."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape:
        raise InvalidInputError(f"times and values differ in length: {t.shape} vs {v.shape}")
    if window is not None:
        lo, hi = window
        keep = (t >= lo) & (t <= hi)
        t, v = t[keep], v[keep]
    if len(t) < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} samples in the fit window, got {len(t)}")
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise InvalidInputError("decay fits need positive finite values")
    if mode == "algebraic":
        if np.any(t <= 0):
            raise InvalidInputError("algebraic fits need positive times")
        x = np.log(t)
    elif mode == "exponential":
        x = t
    else:
        raise InvalidInputError(f"unknown fit mode {mode!r}")
    res = linregress(x, np.log(v))
    return DecayFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        r2=float(res.rvalue**2),
        mode=mode,
        samples=len(t),
    )
