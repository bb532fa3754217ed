from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..linear.propagator import LinearState
from ..spectral import FrequencyGrid, SpectralField, VectorField


class CutoffFilter(BaseModel):
    """Removes every mode with |xi1| <= a1 or |xi2| <= a2."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a1: float = Field(1.0, gt=0)
    a2: float = Field(1.0, gt=0)


def cutoff_mask(grid: FrequencyGrid, filt: CutoffFilter) -> np.ndarray:
    return (np.abs(grid.xi1) > filt.a1) & (np.abs(grid.xi2) > filt.a2)


def apply_cutoff(f: SpectralField, filt: CutoffFilter) -> SpectralField:
    return f.multiply(cutoff_mask(f.grid, filt))


def apply_cutoff_vector(v: VectorField, filt: CutoffFilter) -> VectorField:
    return VectorField(apply_cutoff(v.u1, filt), apply_cutoff(v.u2, filt), solenoidal=v.solenoidal)


def apply_cutoff_state(s: LinearState, filt: CutoffFilter) -> LinearState:
    return LinearState(apply_cutoff_vector(s.u, filt), apply_cutoff(s.theta, filt), s.t)
