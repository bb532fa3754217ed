"""
Versioned CSV tables and JSON run summaries.

A CSV starts with a ``# schema=<name>/<version>`` line, then the header,
then one row per record. Floats are written with repr so they read back
exactly and identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Literal, Mapping, Sequence

import numpy as np

from .. import __version__
from ..errors import ReportIOError, ReportSchemaError
from ..linear.snapshots import Snapshot, write_snapshots_binary, write_snapshots_csv

logger = logging.getLogger(__name__)

_PACKAGE_ROOT = Path(__file__).resolve().parents[1]


@dataclass(frozen=True)
class ReportSchema:
    name: str
    version: int
    columns: tuple[str, ...]

    @property
    def tag(self) -> str:
        return f"{self.name}/{self.version}"


SCHEMAS: dict[str, ReportSchema] = {
    s.name: s
    for s in (
        ReportSchema("linear_verify", 1, ("nu", "eta", "t", "max_rel_error")),
        ReportSchema(
            "kernel_table",
            1,
            ("xi1", "xi2", "t", "region", "re_l1", "im_l1", "re_l2", "im_l2", "K1", "K2", "K3", "K4", "K5"),
        ),
        ReportSchema("kernel_envelope", 1, ("nu", "eta", "C", "c0", "feasible", "violations", "max_ratio")),
        ReportSchema(
            "decay_rates",
            1,
            ("case", "s", "sigma", "t", "measured_norm", "envelope_value", "dominant_exponent"),
        ),
        ReportSchema("lyapunov", 1, ("t", "field", "A", "B", "C0", "lambda", "ratio", "method")),
        ReportSchema(
            "energy",
            1,
            (
                "t",
                "h2_u_sq",
                "h2_theta_sq",
                "int_d2u_h2",
                "int_d1theta_h2",
                "int_d1u2_l2",
                "E",
                "E0",
                "ratio",
            ),
        ),
        ReportSchema(
            "stability_sweep",
            1,
            ("epsilon", "seed", "nu", "eta", "max_ratio", "int_d1u2_l2", "rate_decays", "verdict"),
        ),
        ReportSchema(
            "energy_balance", 1, ("t", "l2_sq", "int_d2u_l2", "int_d1theta_l2", "drift")
        ),
    )
}


def get_schema(name: str) -> ReportSchema:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise ReportSchemaError(f"unknown report schema {name!r}", column="") from None


def _cell(value: Any) -> Any:
    if isinstance(value, np.generic):  # np.float64 reprs with its type name
        return _cell(value.item())
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def render_csv(schema: ReportSchema, rows: Iterable[Mapping[str, Any]]) -> str:
    """CSV text for ``rows``; a row whose keys differ from the schema raises ReportSchemaError."""
    buf = io.StringIO()
    buf.write(f"# schema={schema.tag}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema.columns)
    expected = set(schema.columns)
    for k, row in enumerate(rows):
        keys = set(row)
        if keys != expected:
            bad = sorted(keys - expected) or sorted(expected - keys)
            raise ReportSchemaError(
                f"row {k} of {schema.tag} does not match the schema at column {bad[0]!r}",
                column=bad[0],
            )
        writer.writerow([_cell(row[c]) for c in schema.columns])
    return buf.getvalue()


def write_csv(path: Path, schema: ReportSchema, rows: Iterable[Mapping[str, Any]]) -> Path:
    text = render_csv(schema, rows)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Failed to write report: {path}: {exc}", path=str(path)) from exc
    return path


def read_csv(path: Path, schema: ReportSchema) -> list[dict[str, str]]:
    """Rows of a report written with ``schema``; header or tag mismatches raise ReportSchemaError."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Failed to read report: {path}: {exc}", path=str(path)) from exc
    lines = text.splitlines()
    if not lines or lines[0] != f"# schema={schema.tag}":
        raise ReportSchemaError(f"{path}: expected schema line for {schema.tag}", column="schema")
    reader = csv.reader(lines[1:])
    header = next(reader, [])
    for want, got in zip(schema.columns, header):
        if want != got:
            raise ReportSchemaError(f"{path}: expected column {want!r}, found {got!r}", column=want)
    if len(header) != len(schema.columns):
        missing = schema.columns[len(header):] or ("<extra>",)
        raise ReportSchemaError(f"{path}: header has {len(header)} columns", column=missing[0])
    return [dict(zip(header, row)) for row in reader]


def build_id() -> str:
    """Short sha1 over the package version and sources."""
    h = hashlib.sha1(__version__.encode("utf-8"))
    for src in sorted(_PACKAGE_ROOT.rglob("*.py")):
        h.update(src.relative_to(_PACKAGE_ROOT).as_posix().encode("utf-8"))
        h.update(src.read_bytes())
    return h.hexdigest()[:12]


def peak_rss() -> int | None:
    """Resident set size of this process in bytes, when psutil is importable."""
    try:
        import psutil  # type: ignore

        return int(psutil.Process().memory_info().rss)
    except Exception:
        return None


def _json_safe(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return _json_safe(value.tolist())
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Mapping):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


@dataclass
class Table:
    schema: ReportSchema
    rows: list[dict[str, Any]]
    # appended to the experiment name in the file name; "" for the main table
    suffix: str = ""


@dataclass
class SnapshotSet:
    states: list[Snapshot]
    format: Literal["csv", "binary"] = "csv"

    @property
    def extension(self) -> str:
        return "csv" if self.format == "csv" else "bin"


@dataclass
class RunSummary:
    experiment: str
    config_hash: str
    seed: int
    E0: float | None
    wall_clock: float
    checks: dict[str, bool] = field(default_factory=dict)
    headline: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self, schemas: Sequence[ReportSchema]) -> dict[str, Any]:
        return _json_safe(
            {
                "experiment": self.experiment,
                "schemas": [s.tag for s in schemas],
                "build_id": build_id(),
                "version": __version__,
                "config_hash": self.config_hash,
                "seed": self.seed,
                "E0": self.E0,
                "wall_clock_s": self.wall_clock,
                "peak_rss_bytes": peak_rss(),
                "checks": self.checks,
                "passed": self.passed,
                "headline": self.headline,
            }
        )


def emit_report(
    out_dir: Path,
    summary: RunSummary,
    tables: Sequence[Table],
    snapshots: SnapshotSet | None = None,
) -> list[Path]:
    """Write every table as CSV, the snapshot file when given, then ``<experiment>.summary.json``.

    Returns the paths written in that order.
    """
    paths: list[Path] = []
    for table in tables:
        stem = summary.experiment + (f".{table.suffix}" if table.suffix else "")
        paths.append(write_csv(out_dir / f"{stem}.csv", table.schema, table.rows))
    if snapshots is not None and snapshots.states:
        target = out_dir / f"{summary.experiment}.snapshots.{snapshots.extension}"
        writer = write_snapshots_csv if snapshots.format == "csv" else write_snapshots_binary
        paths.append(writer(target, snapshots.states))
    summary_path = out_dir / f"{summary.experiment}.summary.json"
    payload = summary.to_dict([t.schema for t in tables])
    try:
        summary_path.parent.mkdir(parents=True, exist_ok=True)
        summary_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Failed to write summary: {summary_path}: {exc}", path=str(summary_path)) from exc
    paths.append(summary_path)
    logger.info("wrote %d report files to %s", len(paths), out_dir)
    return paths
