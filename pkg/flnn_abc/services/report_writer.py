# flnn_abc/services/report_writer.py
"""
ReportWriter Service - CSV/JSON artifacts for protocol runs and single
trainings.

Protocol reports are staged as temporary files inside the output
directory and moved into place with os.replace once every file has been
written, so a failed run never leaves a half-updated report set behind.
All floats are written with 6 decimals.
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np
import pandas as pd

from flnn_abc.core.errors import InputError, ReportError
from flnn_abc.services.benchmark import METRICS, ProtocolResult

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"

TRIAL_COLUMNS = ["dataset", "trainer", "fold", "trial", "seed", "status", *METRICS, "iterations", "error"]
SELECTION_COLUMNS = ["dataset", "trainer", "fold", "status", "trial", "seed", *METRICS, "successful_trials", "error"]
SUMMARY_COLUMNS = ["dataset", "trainer", "status", *METRICS, "error"]
COMPLEXITY_COLUMNS = ["dataset", "network_type", "structure", "param_count", "reference_param_count", "note"]
TIMING_COLUMNS = ["dataset", "trainer", "fold", "trial", "wall_time_s"]


def _frame(records: Iterable, columns: List[str]) -> pd.DataFrame:
    rows = [r.model_dump() if hasattr(r, "model_dump") else dict(r) for r in records]
    frame = pd.DataFrame(rows, columns=columns)
    # keep integer columns integral when some rows are empty
    for col in ("trial", "seed", "iterations", "successful_trials", "reference_param_count", "param_count"):
        if col in frame.columns:
            frame[col] = frame[col].astype("Int64")
    return frame


def _round_floats(value):
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v) for v in value]
    return value


class _ReportWriterService:
    """Singleton service for writing run artifacts."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_ReportWriterService, cls).__new__(cls)
        return cls._instance

    def check_writable(self, output_dir: str) -> Path:
        """Fail early if output_dir could not be written, without creating it."""
        path = Path(output_dir)
        if path.exists() and not path.is_dir():
            raise ReportError(f"output path {path} is not a directory")
        existing = path
        while not existing.exists() and existing.parent != existing:
            existing = existing.parent
        if not existing.is_dir() or not os.access(existing, os.W_OK | os.X_OK):
            raise ReportError(f"output directory {path} is not writable")
        return path

    def ensure_writable(self, output_dir: str) -> Path:
        path = Path(output_dir)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ReportError(f"cannot create output directory {path}: {e}")
        if not path.is_dir() or not os.access(path, os.W_OK):
            raise ReportError(f"output directory {path} is not writable")
        return path

    def _stage(self, directory: Path, name: str, write) -> Path:
        handle, temp_name = tempfile.mkstemp(prefix=f".{name}.", dir=directory)
        os.close(handle)
        try:
            write(temp_name)
        except Exception:
            os.unlink(temp_name)
            raise
        return Path(temp_name)

    def _commit(self, directory: Path, staged: Dict[str, Path]) -> List[Path]:
        written = []
        for name, temp_path in staged.items():
            target = directory / name
            os.replace(temp_path, target)
            written.append(target)
        return written

    def emit_reports(self, result: ProtocolResult, output_dir: str) -> List[Path]:
        """
        Write trials.csv, selections.csv, summary.csv, complexity.csv,
        timings.csv and summary.json (plus traces/ when recorded).

        Args:
            result: Protocol output; must hold at least one trial
            output_dir: Target directory (created when missing)

        Returns:
            Paths of the files written
        """
        if not result.trials:
            raise InputError("no trial reports to emit")
        directory = self.ensure_writable(output_dir)

        frames = {
            "trials.csv": _frame(result.trials, TRIAL_COLUMNS),
            "selections.csv": _frame(result.selections, SELECTION_COLUMNS),
            "summary.csv": _frame(result.summary, SUMMARY_COLUMNS),
            "complexity.csv": _frame(result.complexity, COMPLEXITY_COLUMNS),
            "timings.csv": _frame(result.trials, TIMING_COLUMNS),
        }
        payload = _round_floats(
            {
                "summary": [row.model_dump() for row in result.summary],
                "selections": [row.model_dump() for row in result.selections],
                "complexity": [row.model_dump() for row in result.complexity],
                "errors": result.errors,
            }
        )

        staged: Dict[str, Path] = {}
        try:
            for name, frame in frames.items():
                staged[name] = self._stage(
                    directory, name, lambda p, f=frame: f.to_csv(p, index=False, float_format=FLOAT_FORMAT)
                )
            staged["summary.json"] = self._stage(
                directory, "summary.json", lambda p: Path(p).write_text(json.dumps(payload, indent=2) + "\n")
            )
        except OSError as e:
            for temp_path in staged.values():
                temp_path.unlink(missing_ok=True)
            raise ReportError(f"failed writing reports to {directory}: {e}")

        written = self._commit(directory, staged)
        if result.traces:
            traces_dir = directory / "traces"
            traces_dir.mkdir(exist_ok=True)
            for (dataset, trainer, fold, trial), history in sorted(result.traces.items()):
                written.append(
                    self.write_history(traces_dir / f"{dataset}_{trainer}_{fold}_{trial}.csv", history, "iteration")
                )
        logger.info(f"Wrote {len(written)} report files to {directory}")
        return written

    def write_history(self, path, history: Sequence[float], index_name: str, start: int = 0) -> Path:
        """History CSV; BP epochs count from 1, ABC cycles from 0 (initial population)."""
        frame = pd.DataFrame({index_name: range(start, start + len(history)), "mse": list(history)})
        if index_name == "cycle":
            frame = frame.rename(columns={"mse": "best_objective"})
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return Path(path)

    def write_params(self, path, params) -> Path:
        values = [float(v) for v in np.asarray(params, dtype=float)]
        Path(path).write_text(json.dumps(values) + "\n")
        return Path(path)

    def read_params(self, path) -> np.ndarray:
        try:
            values = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read model file {path}: {e}")
        if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
            raise InputError(f"model file {path} must hold a flat JSON array of numbers")
        return np.array(values, dtype=float)

    def format_summary(self, result: ProtocolResult) -> str:
        frame = _frame(result.summary, SUMMARY_COLUMNS).drop(columns=["error"])
        return frame.to_string(index=False, float_format=lambda v: f"{v:.6f}")


# Create singleton instance
ReportWriter = _ReportWriterService()
