from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


Scheme = Literal["if-rk4", "imex-cn"]


class Params(BaseModel):
    """Kinematic viscosity and thermal diffusivity."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    nu: float = Field(1.0, gt=0)
    eta: float = Field(1.0, gt=0)


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n1: int = Field(128, ge=4)
    n2: int = Field(128, ge=4)
    L1: float = Field(1.0, gt=0)
    L2: float = Field(1.0, gt=0)

    @field_validator("n1", "n2")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"mode count must be even, got {v}")
        return v


class SimConfig(BaseModel):
    """Everything a nonlinear run depends on."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    params: Params = Field(default_factory=Params)
    grid: GridSpec = Field(default_factory=GridSpec)
    dt: float = Field(1e-3, gt=0)
    T: float = Field(10.0, ge=0)
    scheme: Scheme = "if-rk4"
    nonlinear: bool = True
    a1: float = Field(1.0, gt=0)
    a2: float = Field(1.0, gt=0)
    delta: float = Field(0.1, gt=0)
    lyap_lambda: float = Field(0.5, gt=0)
    cadence: int = Field(10, ge=1)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _horizon(self) -> "SimConfig":
        # T == 0 is allowed and yields only the initial record.
        if 0 < self.T < self.dt:
            raise ValueError(f"T={self.T} is shorter than dt={self.dt}")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def config_hash(self) -> str:
        return hash_payload(self.model_dump(mode="json"))


def hash_payload(payload: Any) -> str:
    raw = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


@dataclass(frozen=True, slots=True)
class DiagnosticsRecord:
    """One cadence tick of a nonlinear run.

    Squared norms are stored so that the time integrals of the energy
    functional can be formed directly. ``int_*`` columns are the solver's
    running dissipation integrals.
    """

    t: float
    step: int
    l2_sq: float
    h2_u_sq: float
    h2_theta_sq: float
    d2u_l2_sq: float
    d1theta_l2_sq: float
    d2u_h2_sq: float
    d1theta_h2_sq: float
    d1u2_l2_sq: float
    int_d2u_l2: float
    int_d1theta_l2: float
    omega_l2: float
    grad_omega_l2: float
    max_u: float
    cfl: float

    @property
    def h2_sq(self) -> float:
        return self.h2_u_sq + self.h2_theta_sq

    def as_row(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]
