"""Experiment runners, versioned reports and named random streams."""

from .reports import (
    SCHEMAS,
    ReportSchema,
    RunSummary,
    SnapshotSet,
    Table,
    build_id,
    emit_report,
    get_schema,
    read_csv,
    render_csv,
    write_csv,
)
from .runners import EXPERIMENTS, RUNNERS, ExperimentOutcome, ExperimentSpec, decay_cases, execute
from .seeding import seed_sequence, stream, stream_key

__all__ = [
    "EXPERIMENTS",
    "RUNNERS",
    "SCHEMAS",
    "ExperimentOutcome",
    "ExperimentSpec",
    "ReportSchema",
    "RunSummary",
    "SnapshotSet",
    "Table",
    "build_id",
    "decay_cases",
    "emit_report",
    "execute",
    "get_schema",
    "read_csv",
    "render_csv",
    "seed_sequence",
    "stream",
    "stream_key",
    "write_csv",
]
