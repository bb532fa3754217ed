"""
Field snapshot files.

CSV layout, one row per (snapshot, field, mode):

    t,field,i1,i2,re,im

with signed lattice indices and ``repr`` floats.

Binary layout, all little-endian:

    magic   4 bytes  b"BQLS"
    version u32      1
    n1, n2  u32      grid sizes
    nfields u32      3 (u1, u2, theta)
    then per snapshot: t as f64, followed by nfields * n1 * n2 complex128
    coefficients in C order, field-major (FFT index order on both axes).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from ..errors import GridError, ReportIOError, ReportSchemaError
from ..spectral import FrequencyGrid, SpectralField, VectorField
from .propagator import LinearState

MAGIC = b"BQLS"
VERSION = 1
FIELD_NAMES = ("u1", "u2", "theta")
CSV_COLUMNS = ["t", "field", "i1", "i2", "re", "im"]

_HEADER = np.dtype([("magic", "S4"), ("version", "<u4"), ("n1", "<u4"), ("n2", "<u4"), ("nfields", "<u4")])


class Snapshot(Protocol):
    @property
    def u(self) -> VectorField: ...

    @property
    def theta(self) -> SpectralField: ...

    @property
    def t(self) -> float: ...


def _fields(s: Snapshot) -> tuple[SpectralField, SpectralField, SpectralField]:
    return (s.u.u1, s.u.u2, s.theta)


def _common_grid(snapshots: Sequence[Snapshot]) -> FrequencyGrid:
    grid = snapshots[0].theta.grid
    for s in snapshots:
        if s.theta.grid != grid:
            raise GridError("snapshots live on different grids")
    return grid


def snapshots_to_csv(snapshots: Iterable[Snapshot]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in snapshots:
        grid = s.theta.grid
        for name, field in zip(FIELD_NAMES, _fields(s)):
            for a in range(grid.n1):
                for b in range(grid.n2):
                    c = field.coeffs[a, b]
                    writer.writerow(
                        [repr(float(s.t)), name, int(grid.index1[a]), int(grid.index2[b]),
                         repr(float(c.real)), repr(float(c.imag))]
                    )
    return buf.getvalue()


def write_snapshots_csv(path: Path, snapshots: Iterable[Snapshot]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(snapshots_to_csv(snapshots), encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Failed to write snapshots: {path}: {exc}", str(path))
    return path


def read_snapshots_csv(path: Path, grid: FrequencyGrid) -> list[LinearState]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"Failed to read snapshots: {path}: {exc}", str(path))
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_COLUMNS:
        missing = next((c for c in CSV_COLUMNS if header is None or c not in header), "header")
        raise ReportSchemaError(f"snapshot CSV header mismatch in {path}", missing)
    frames: dict[float, np.ndarray] = {}
    for row in reader:
        t, name, i1, i2, re, im = row
        arr = frames.setdefault(float(t), np.zeros((3, *grid.shape), dtype=np.complex128))
        if name not in FIELD_NAMES:
            raise ReportSchemaError(f"unknown field {name!r} in {path}", "field")
        arr[(FIELD_NAMES.index(name), *grid.position(int(i1), int(i2)))] = complex(float(re), float(im))
    return [LinearState.from_arrays(grid, a[0], a[1], a[2], t) for t, a in frames.items()]


def snapshots_to_bytes(snapshots: Sequence[Snapshot]) -> bytes:
    if not snapshots:
        raise GridError("at least one snapshot is needed to fix the grid")
    grid = _common_grid(snapshots)
    header = np.array([(MAGIC, VERSION, grid.n1, grid.n2, len(FIELD_NAMES))], dtype=_HEADER)
    parts = [header.tobytes()]
    for s in snapshots:
        parts.append(np.array([s.t], dtype="<f8").tobytes())
        block = np.stack([f.coeffs for f in _fields(s)]).astype("<c16")
        parts.append(block.tobytes(order="C"))
    return b"".join(parts)


def write_snapshots_binary(path: Path, snapshots: Sequence[Snapshot]) -> Path:
    payload = snapshots_to_bytes(snapshots)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as exc:
        raise ReportIOError(f"Failed to write snapshots: {path}: {exc}", str(path))
    return path


def snapshots_from_bytes(raw: bytes, L1: float = 1.0, L2: float = 1.0) -> list[LinearState]:
    if len(raw) < _HEADER.itemsize:
        raise ReportSchemaError("snapshot stream shorter than its header", "magic")
    header = np.frombuffer(raw[: _HEADER.itemsize], dtype=_HEADER)[0]
    if bytes(header["magic"]) != MAGIC:
        raise ReportSchemaError("not a snapshot stream (bad magic)", "magic")
    if int(header["version"]) != VERSION:
        raise ReportSchemaError(f"unsupported snapshot version {int(header['version'])}", "version")
    n1, n2, nf = int(header["n1"]), int(header["n2"]), int(header["nfields"])
    if nf != len(FIELD_NAMES):
        raise ReportSchemaError(f"expected {len(FIELD_NAMES)} fields, got {nf}", "nfields")
    grid = FrequencyGrid(n1, n2, L1, L2)
    record = 8 + 16 * nf * n1 * n2
    body = raw[_HEADER.itemsize:]
    if len(body) % record:
        raise ReportSchemaError("truncated snapshot record", "coeffs")
    out: list[LinearState] = []
    for k in range(len(body) // record):
        chunk = body[k * record : (k + 1) * record]
        t = float(np.frombuffer(chunk[:8], dtype="<f8")[0])
        coeffs = np.frombuffer(chunk[8:], dtype="<c16").reshape(nf, n1, n2).astype(np.complex128)
        out.append(LinearState.from_arrays(grid, coeffs[0], coeffs[1], coeffs[2], t))
    return out


def read_snapshots_binary(path: Path, L1: float = 1.0, L2: float = 1.0) -> list[LinearState]:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ReportIOError(f"Failed to read snapshots: {path}: {exc}", str(path))
    return snapshots_from_bytes(raw, L1, L2)
