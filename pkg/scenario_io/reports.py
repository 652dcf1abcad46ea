"""
Result artefacts: users.csv, history.csv, summary.json and plot-ready tables

Floats are written with 9 significant digits and keys in sorted order so
that rewriting an identical report produces identical bytes.
"""
import hashlib
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from channel.geometry import NetworkScenario
from config import Config
from models.errors import InvalidParameterError, ReportWriteError
from models.results import RunReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = f"%.{Config.FLOAT_SIG_DIGITS}g"

USER_COLUMNS = ["user_id", "x_m", "y_m", "alpha", "alpha_tilde", "xi", "p_w", "sinr", "rate_mbps"]
HISTORY_COLUMNS = ["generation", "best_fitness", "mean_fitness", "evals_cum"]


class ReportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def scenario_digest(scenario: NetworkScenario) -> str:
    """SHA-256 over the canonical bytes of every large-scale statistic"""
    digest = hashlib.sha256()
    for array in (
        scenario.beta_terrestrial,
        scenario.beta_sat,
        scenario.los_vectors,
        scenario.correlation,
    ):
        canonical = np.ascontiguousarray(array)
        digest.update(str(canonical.shape).encode("ascii"))
        digest.update(canonical.astype(canonical.dtype.newbyteorder("<")).tobytes())
    return digest.hexdigest()


def round_floats(value: Any, digits: int = Config.FLOAT_SIG_DIGITS) -> Any:
    """Round every float in a JSON tree to `digits` significant digits"""
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {key: round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(item, digits) for item in value]
    return value


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportWriteError(str(path), exc) from exc


def write_table(
    rows: Union[pd.DataFrame, Sequence[Dict[str, Any]]],
    path: Union[str, Path],
    columns: Optional[List[str]] = None,
) -> Path:
    """Write a table as CSV with the fixed float format"""
    path = Path(path)
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=columns)
    if columns is not None:
        frame = frame[columns]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as exc:
        raise ReportWriteError(str(path), exc) from exc
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def users_frame(report: RunReport) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in report.users], columns=USER_COLUMNS)


def history_frame(report: RunReport) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in report.history], columns=HISTORY_COLUMNS)


def report_json(report: RunReport) -> str:
    tree = round_floats(report.model_dump(mode="json"))
    return json.dumps(tree, sort_keys=True, indent=2) + "\n"


def write_report(
    report: RunReport,
    fmt: Union[ReportFormat, str],
    path: Union[str, Path],
    table: str = "users",
) -> Path:
    """Persist a run report as JSON (full tree) or CSV (users or history table)"""
    fmt = ReportFormat(fmt)
    path = Path(path)
    if fmt == ReportFormat.JSON:
        _write_text(path, report_json(report))
        return path
    if table == "users":
        return write_table(users_frame(report), path)
    if table == "history":
        return write_table(history_frame(report), path)
    raise InvalidParameterError(f"unknown report table '{table}'")


def write_run_artefacts(report: RunReport, out_dir: Union[str, Path]) -> Dict[str, str]:
    """users.csv, history.csv and summary.json in one directory"""
    out_dir = Path(out_dir)
    outputs = {
        "users": write_report(report, ReportFormat.CSV, out_dir / "users.csv", table="users"),
        "history": write_report(report, ReportFormat.CSV, out_dir / "history.csv", table="history"),
        "summary": write_report(report, ReportFormat.JSON, out_dir / "summary.json"),
    }
    logger.info(f"Run artefacts written to {out_dir}")
    return {name: str(path) for name, path in outputs.items()}
