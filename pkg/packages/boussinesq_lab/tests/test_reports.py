import json
import math

import numpy as np
import pytest

from boussinesq_lab.errors import ReportSchemaError
from boussinesq_lab.experiments import (
    SCHEMAS,
    ReportSchema,
    RunSummary,
    Table,
    build_id,
    emit_report,
    get_schema,
    read_csv,
    render_csv,
    write_csv,
)

SCHEMA = ReportSchema("demo", 2, ("t", "value", "ok"))


def test_render_layout():
    text = render_csv(SCHEMA, [{"t": 0.1, "value": np.float64(1 / 3), "ok": True}])
    lines = text.splitlines()
    assert lines[0] == "# schema=demo/2"
    assert lines[1] == "t,value,ok"
    assert lines[2] == f"0.1,{1 / 3!r},true"


def test_rows_must_match_the_schema():
    with pytest.raises(ReportSchemaError) as info:
        render_csv(SCHEMA, [{"t": 0.0, "value": 1.0}])
    assert info.value.column == "ok"
    with pytest.raises(ReportSchemaError) as info:
        render_csv(SCHEMA, [{"t": 0.0, "value": 1.0, "ok": False, "extra": 1}])
    assert info.value.column == "extra"


def test_written_table_reads_back(tmp_path):
    path = write_csv(tmp_path / "nested" / "demo.csv", SCHEMA, [{"t": 1.5, "value": -2.0, "ok": False}])
    assert read_csv(path, SCHEMA) == [{"t": "1.5", "value": "-2.0", "ok": "false"}]


def test_read_rejects_other_schema_or_header(tmp_path):
    path = write_csv(tmp_path / "demo.csv", SCHEMA, [])
    with pytest.raises(ReportSchemaError) as info:
        read_csv(path, ReportSchema("demo", 3, SCHEMA.columns))
    assert info.value.column == "schema"
    path.write_text("# schema=demo/2\nt,val,ok\n", encoding="utf-8")
    with pytest.raises(ReportSchemaError) as info:
        read_csv(path, SCHEMA)
    assert info.value.column == "value"


def test_known_schemas():
    assert get_schema("lyapunov").columns == ("t", "field", "A", "B", "C0", "lambda", "ratio", "method")
    assert all(s.version >= 1 for s in SCHEMAS.values())
    with pytest.raises(ReportSchemaError):
        get_schema("nope")


def test_identical_rows_give_identical_bytes():
    rows = [{"t": 0.1 * k, "value": math.sqrt(k), "ok": k % 2 == 0} for k in range(20)]
    assert render_csv(SCHEMA, rows) == render_csv(SCHEMA, [dict(r) for r in rows])


def test_emit_report(tmp_path):
    summary = RunSummary(
        experiment="demo-run",
        config_hash="ab" * 32,
        seed=3,
        E0=1.25,
        wall_clock=0.5,
        checks={"a": True, "b": False},
        headline={"slope": float("nan"), "orders": np.array([2.0, 4.0])},
    )
    tables = [Table(SCHEMA, [{"t": 0.0, "value": 1.0, "ok": True}]), Table(SCHEMA, [], suffix="extra")]
    paths = emit_report(tmp_path, summary, tables)
    assert [p.name for p in paths] == ["demo-run.csv", "demo-run.extra.csv", "demo-run.summary.json"]
    data = json.loads(paths[-1].read_text(encoding="utf-8"))
    assert data["passed"] is False
    assert data["schemas"] == ["demo/2", "demo/2"]
    assert data["headline"] == {"slope": None, "orders": [2.0, 4.0]}
    assert data["seed"] == 3 and data["E0"] == 1.25
    assert data["build_id"] == build_id()
    assert len(data["build_id"]) == 12
