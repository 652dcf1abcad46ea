"""
Configuration, random streams and result persistence
"""
from scenario_io.config_loader import apply_overrides, emit_config, load_config, load_config_file
from scenario_io.reports import (
    ReportFormat,
    round_floats,
    scenario_digest,
    write_report,
    write_run_artefacts,
    write_table,
)
from scenario_io.streams import restore_stream, seeded_stream, stream_state

__all__ = [
    "ReportFormat",
    "apply_overrides",
    "emit_config",
    "load_config",
    "load_config_file",
    "restore_stream",
    "round_floats",
    "scenario_digest",
    "seeded_stream",
    "stream_state",
    "write_report",
    "write_run_artefacts",
    "write_table",
]
