import numpy as np
import pytest

from boussinesq_lab.errors import ReportSchemaError
from boussinesq_lab.linear import (
    propagate_exact,
    read_snapshots_binary,
    read_snapshots_csv,
    snapshots_from_bytes,
    snapshots_to_bytes,
    snapshots_to_csv,
    write_snapshots_binary,
    write_snapshots_csv,
)
from boussinesq_lab.nonlinear import random_solenoidal
from boussinesq_lab.spectral import make_grid


@pytest.fixture
def snaps(rng, params):
    grid = make_grid(8, 8)
    s0 = random_solenoidal(grid, 1.0, rng, band=2).to_linear()
    return [s0, propagate_exact(s0, 0.25, params)]


def test_binary_header_layout(snaps):
    raw = snapshots_to_bytes(snaps)
    assert raw[:4] == b"BQLS"
    assert np.frombuffer(raw[4:20], dtype="<u4").tolist() == [1, 8, 8, 3]
    assert len(raw) == 20 + 2 * (8 + 16 * 3 * 64)


def test_binary_file_preserves_coefficients(tmp_path, snaps):
    path = write_snapshots_binary(tmp_path / "run.bin", snaps)
    back = read_snapshots_binary(path)
    assert [s.t for s in back] == [s.t for s in snaps]
    assert np.array_equal(back[1].stacked(), snaps[1].stacked())


def test_csv_file_preserves_coefficients(tmp_path, snaps):
    path = write_snapshots_csv(tmp_path / "run.csv", snaps)
    back = read_snapshots_csv(path, snaps[0].grid)
    assert len(back) == 2
    assert np.array_equal(back[1].stacked(), snaps[1].stacked())
    assert snapshots_to_csv(snaps).splitlines()[0] == "t,field,i1,i2,re,im"


def test_bad_magic(snaps):
    raw = bytearray(snapshots_to_bytes(snaps))
    raw[:4] = b"XXXX"
    with pytest.raises(ReportSchemaError):
        snapshots_from_bytes(bytes(raw))


def test_truncated_stream(snaps):
    with pytest.raises(ReportSchemaError):
        snapshots_from_bytes(snapshots_to_bytes(snaps)[:-5])


def test_csv_header_mismatch(tmp_path, snaps):
    path = tmp_path / "bad.csv"
    path.write_text("t,name,i1,i2,re,im\n", encoding="utf-8")
    with pytest.raises(ReportSchemaError) as info:
        read_snapshots_csv(path, snaps[0].grid)
    assert info.value.column == "field"
