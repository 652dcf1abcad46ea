"""
Experiment commands behind the command-line interface
"""
from experiments.commands import (
    CommandResult,
    build_run_report,
    build_scenario,
    cmd_compare_modes,
    cmd_exhaustive,
    cmd_hitting_time,
    cmd_optimize,
    cmd_sweep,
    cmd_validate,
    hitting_time_bound,
    mode_shares,
    run_optimizer,
)

__all__ = [
    "CommandResult",
    "build_run_report",
    "build_scenario",
    "cmd_compare_modes",
    "cmd_exhaustive",
    "cmd_hitting_time",
    "cmd_optimize",
    "cmd_sweep",
    "cmd_validate",
    "hitting_time_bound",
    "mode_shares",
    "run_optimizer",
]
