from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError
from .models import GridSpec, Params, Scheme, SimConfig, hash_payload

ENV_CONFIG_DIR = "BOUSSINESQ_LAB_CONFIG_DIR"


def _default_config_dir() -> Path:
    # Windows: prefer %APPDATA%\boussinesq-lab; fallback to ~/.config/boussinesq-lab
    if os.name == "nt":
        appdata = os.getenv("APPDATA")
        if appdata:
            return Path(appdata) / "boussinesq-lab"
    return Path.home() / ".config" / "boussinesq-lab"


def get_config_dir() -> Path:
    raw = (os.getenv(ENV_CONFIG_DIR) or "").strip()
    if raw:
        return Path(os.path.expanduser(raw))
    return _default_config_dir()


def _read_toml(path: Path) -> dict[str, Any]:
    try:
        import tomllib  # py3.11+
    except Exception as exc:  # pragma: no cover
        raise ConfigError(f"TOML support unavailable: {exc}")

    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"Missing config file: {path}", meta={"path": str(path)})
    except Exception as exc:
        raise ConfigError(f"Failed to parse TOML: {path}: {exc}", meta={"path": str(path)})

    return data if isinstance(data, dict) else {}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class TimeSection(_Section):
    dt: float = Field(1e-3, gt=0)
    T: float = Field(10.0, ge=0)
    cadence: int = Field(10, ge=1)


class SchemeSection(_Section):
    name: Scheme = "if-rk4"
    nonlinear: bool = True


class DiagnosticsSection(_Section):
    a1: float = Field(1.0, gt=0)
    a2: float = Field(1.0, gt=0)
    # Resolved from the physical parameters when absent.
    delta: float | None = Field(None, gt=0)
    lyap_lambda: float | None = Field(None, gt=0)


class LinearVerifySection(_Section):
    n: int = Field(32, ge=4)
    band: int = Field(6, ge=1)
    times: list[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0])
    nus: list[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0])
    etas: list[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0])
    tolerance: float = Field(1e-8, gt=0)
    semigroup_times: tuple[float, float] = (0.3, 0.7)
    wave_n: int = Field(8, ge=4)
    wave_dt: float = Field(0.02, gt=0)
    duhamel_samples: int = Field(201, ge=3)
    duhamel_tolerance: float = Field(1e-6, gt=0)


class KernelBoundsSection(_Section):
    samples: int = Field(10_000, ge=1)
    xi_max: float = Field(50.0, gt=0)
    param_range: tuple[float, float] = (0.1, 10.0)
    vieta_tolerance: float = Field(1e-12, gt=0)
    lattice_xi: int = Field(50, ge=2)
    lattice_t: int = Field(20, ge=2)
    lattice_xi_max: float = Field(10.0, gt=0)
    lattice_t_max: float = Field(20.0, gt=0)
    refine: int = Field(2, ge=1)
    c_max: float = Field(1e3, gt=0)
    c0_min: float = Field(1e-3, gt=0)
    safety: float = Field(2.0, ge=1)
    table_xi: list[tuple[float, float]] = Field(
        default_factory=lambda: [(1.0, 1.0), (1.0, 10.0), (0.0, 1.0), (1.0, 0.0), (3.0, 4.0)]
    )
    table_t: list[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 5.0])


class DecayRatesSection(_Section):
    s: float = Field(0.0, ge=0)
    sigma: float = Field(2.0, ge=0)
    width: float = Field(1.0, gt=0)
    amplitude: float = 1.0
    t_min: float = Field(10.0, gt=0)
    t_max: float = Field(1000.0, gt=0)
    n_times: int = Field(20, ge=10)
    rtol: float = Field(1e-6, gt=0)
    max_panels: int = Field(400_000, ge=16)
    slope_max: float = -0.85


class ExpDecaySection(_Section):
    n: int = Field(128, ge=4)
    band: int = Field(8, ge=1)
    epsilon: float = Field(1e-2, gt=0)
    T: float = Field(10.0, gt=0)
    samples: int = Field(1000, ge=10)
    residual_dts: list[float] = Field(default_factory=lambda: [0.02, 0.01, 0.005])
    order_min: float = 1.8
    rate_fraction: float = Field(0.8, gt=0)


class StabilitySweepSection(_Section):
    epsilons: list[float] = Field(default_factory=lambda: [1e-3, 1e-2])
    seeds: int = Field(5, ge=1)
    T: float = Field(50.0, gt=0)
    band: int = Field(4, ge=1)
    growth_bound: float = Field(4.0, gt=1)


class EnergyBalanceSection(_Section):
    epsilon: float = Field(1e-2, gt=0)
    T: float = Field(10.0, gt=0)
    band: int = Field(4, ge=1)
    drift_tolerance: float = Field(1e-6, gt=0)
    cancellation_samples: int = Field(100, ge=1)
    cancellation_n: int = Field(32, ge=4)
    cancellation_tolerance: float = Field(1e-10, gt=0)
    order_n: int = Field(32, ge=4)
    order_T: float = Field(0.4, gt=0)
    order_dts: list[float] = Field(default_factory=lambda: [0.04, 0.02, 0.01])
    order_min: float = 3.8
    vorticity_dts: list[float] = Field(default_factory=lambda: [0.02, 0.01])
    triple_samples: int = Field(1000, ge=1)
    triple_n: int = Field(16, ge=4)
    triple_seeds: int = Field(2, ge=2)
    triple_spread: float = Field(0.2, gt=0)


class SnapshotSection(_Section):
    # records between written snapshots; 0 writes none
    every: int = Field(0, ge=0)
    format: Literal["csv", "binary"] = "csv"


class LabConfig(_Section):
    """A parsed experiment configuration file."""

    physical: Params = Field(default_factory=Params)
    grid: GridSpec = Field(default_factory=GridSpec)
    time: TimeSection = Field(default_factory=TimeSection)
    scheme: SchemeSection = Field(default_factory=SchemeSection)
    diagnostics: DiagnosticsSection = Field(default_factory=DiagnosticsSection)
    seed: int = Field(0, ge=0)

    linear_verify: LinearVerifySection = Field(default_factory=LinearVerifySection)
    kernel_bounds: KernelBoundsSection = Field(default_factory=KernelBoundsSection)
    decay_rates: DecayRatesSection = Field(default_factory=DecayRatesSection)
    exp_decay: ExpDecaySection = Field(default_factory=ExpDecaySection)
    stability_sweep: StabilitySweepSection = Field(default_factory=StabilitySweepSection)
    energy_balance: EnergyBalanceSection = Field(default_factory=EnergyBalanceSection)
    snapshots: SnapshotSection = Field(default_factory=SnapshotSection)

    def sim_config(self, *, seed: int | None = None, **overrides: Any) -> SimConfig:
        from .diagnostics.lyapunov import admissible_lambda

        p = self.physical
        diag = self.diagnostics
        delta = diag.delta if diag.delta is not None else 0.1 * min(p.nu, p.eta, 1.0)
        lam = (
            diag.lyap_lambda
            if diag.lyap_lambda is not None
            else admissible_lambda(p, diag.a1, diag.a2)
        )
        values: dict[str, Any] = {
            "params": p,
            "grid": self.grid,
            "dt": self.time.dt,
            "T": self.time.T,
            "scheme": self.scheme.name,
            "nonlinear": self.scheme.nonlinear,
            "a1": diag.a1,
            "a2": diag.a2,
            "delta": delta,
            "lyap_lambda": lam,
            "cadence": self.time.cadence,
            "seed": self.seed if seed is None else seed,
        }
        values.update(overrides)
        try:
            return SimConfig(**values)
        except ValidationError as exc:
            raise ConfigError(_describe(exc, None))

    def config_hash(self) -> str:
        return hash_payload(self.model_dump(mode="json"))


def _describe(exc: ValidationError, path: Path | None) -> str:
    parts: list[str] = []
    for err in exc.errors():
        key = ".".join(str(x) for x in err.get("loc", ()))
        if err.get("type") == "extra_forbidden":
            parts.append(f"unknown key '{key}'")
        else:
            parts.append(f"{key}: {err.get('msg')}")
    where = f"{path}: " if path is not None else ""
    return f"Invalid config: {where}" + "; ".join(parts)


def resolve_config_path(raw: str | None) -> Path | None:
    """Map a ``--config`` argument to a file.

    Bare names without a suffix are looked up as ``<name>.toml`` in the
    config directory.
    """

    if raw is None:
        return None
    candidate = Path(os.path.expanduser(raw))
    if candidate.suffix or candidate.exists() or len(candidate.parts) > 1:
        return candidate
    return get_config_dir() / f"{raw}.toml"


def load_config(path: Path | None = None) -> LabConfig:
    raw: dict[str, Any] = {} if path is None else _read_toml(path)
    try:
        return LabConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(_describe(exc, path), meta={"path": str(path) if path else None})
