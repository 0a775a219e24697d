"""
Result IO - JSON-lines trial records, summary JSON/CSV and the config sidecar.

Every writer emits bytes that depend only on its input, so two runs of the
same sweep produce identical files.
"""

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence, Union

from pydantic import ValidationError

from core.errors import DataLoadError
from core.models import ExperimentConfig, SummaryStats, TrialRecord

PathLike = Union[str, Path]

SUMMARY_COLUMNS = (
    "quantity",
    "count",
    "failed",
    "median",
    "q1",
    "q3",
    "pct_in_accuracy",
    "pct_stderr",
    "n_outliers",
    "mean_circuit_executions",
)


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


# ==================== TRIAL RECORDS ====================

def write_records(records: Iterable[TrialRecord], path: PathLike) -> Path:
    """One TrialRecord per line."""
    path = Path(path)
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(record.model_dump_json() + "\n")
    return path


def read_records(path: PathLike) -> list[TrialRecord]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise DataLoadError(str(path), str(e)) from e

    records = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(TrialRecord.model_validate_json(line))
        except ValidationError as e:
            raise DataLoadError(str(path), f"line {number}: {e.errors()[0]['msg']}") from e
    return records


def read_many(paths: Sequence[PathLike]) -> list[TrialRecord]:
    records: list[TrialRecord] = []
    for path in paths:
        records.extend(read_records(path))
    return records


# ==================== CONFIG SIDECAR ====================

def sidecar_path(records_path: PathLike) -> Path:
    """``trials.jsonl`` -> ``trials.config.json``"""
    path = Path(records_path)
    return path.with_name(f"{path.stem}.config.json")


def write_config(config: ExperimentConfig, records_path: PathLike) -> Path:
    path = sidecar_path(records_path)
    _ensure_parent(path)
    path.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_config(records_path: PathLike) -> ExperimentConfig | None:
    """The sidecar config of a records file, or None when there is none."""
    path = sidecar_path(records_path)
    if not path.exists():
        return None
    try:
        return ExperimentConfig.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise DataLoadError(str(path), str(e)) from e


# ==================== SUMMARIES ====================

def write_summary_json(summaries: Sequence[SummaryStats], path: PathLike,
                       config: ExperimentConfig | None = None) -> Path:
    path = Path(path)
    _ensure_parent(path)
    payload = {
        "axes": config.axes() if config is not None else {},
        "summaries": [s.model_dump(mode="json") for s in summaries],
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def summary_rows(summaries: Sequence[SummaryStats], config: ExperimentConfig | None = None) -> list[dict]:
    axes = config.axes() if config is not None else {}
    rows = []
    for s in summaries:
        data = s.model_dump(mode="json")
        rows.append({**axes, **{k: data[k] for k in SUMMARY_COLUMNS}})
    return rows


def write_summary_csv(summaries: Sequence[SummaryStats], path: PathLike,
                      config: ExperimentConfig | None = None) -> Path:
    """Plot-ready CSV: config axes first, then the statistics."""
    path = Path(path)
    _ensure_parent(path)
    rows = summary_rows(summaries, config)
    fieldnames = list(config.axes()) if config is not None else []
    fieldnames += list(SUMMARY_COLUMNS)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return path
