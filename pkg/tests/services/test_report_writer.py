"""
Test ReportWriter service (services/report_writer.py).
"""
import json
import os

import numpy as np
import pandas as pd
import pytest

from flnn_abc.core.errors import InputError, ReportError
from flnn_abc.services.benchmark import DEFAULT_TRAINERS, BenchmarkRunner, ProtocolResult
from flnn_abc.services.report_writer import ReportWriter, SUMMARY_COLUMNS, TRIAL_COLUMNS

REPORT_FILES = {"trials.csv", "selections.csv", "summary.csv", "complexity.csv", "timings.csv", "summary.json"}


@pytest.fixture
def protocol_result(quick_run_config) -> ProtocolResult:
    """Protocol output on the toy dataset with real trainers."""
    return BenchmarkRunner.run_protocol(quick_run_config.model_copy(update={"save_traces": True}))


# ============================================
# emit_reports Tests
# ============================================

def test_emit_writes_every_report(protocol_result, tmp_path):
    """Test all report files are written with the expected row counts."""
    out = tmp_path / "run"
    written = ReportWriter.emit_reports(protocol_result, str(out))
    assert REPORT_FILES <= {p.name for p in written}
    assert REPORT_FILES <= set(os.listdir(out))

    trials = pd.read_csv(out / "trials.csv")
    assert list(trials.columns) == TRIAL_COLUMNS
    assert len(trials) == len(protocol_result.trials)
    summary = pd.read_csv(out / "summary.csv")
    assert list(summary.columns) == SUMMARY_COLUMNS
    assert len(summary) == 3


def test_trials_csv_excludes_wall_time(protocol_result, tmp_path):
    """Test wall time goes to timings.csv only."""
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    assert "wall_time_s" not in pd.read_csv(tmp_path / "trials.csv").columns
    assert "wall_time_s" in pd.read_csv(tmp_path / "timings.csv").columns


def test_floats_written_with_six_decimals(protocol_result, tmp_path):
    """Test metric columns carry exactly six decimals."""
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    first_row = (tmp_path / "summary.csv").read_text().splitlines()[1].split(",")
    assert len(first_row[3].split(".")[1]) == 6


def test_summary_json_matches_csv(protocol_result, tmp_path):
    """Test summary.json holds the same rows as summary.csv."""
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    payload = json.loads((tmp_path / "summary.json").read_text())
    summary = pd.read_csv(tmp_path / "summary.csv")
    assert len(payload["summary"]) == len(summary)
    assert payload["summary"][0]["test_accuracy_pct"] == pytest.approx(summary["test_accuracy_pct"][0], abs=1e-6)
    assert payload["errors"] == []


def test_traces_written(protocol_result, tmp_path):
    """Test per-trial traces land under traces/."""
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    traces = sorted((tmp_path / "traces").iterdir())
    assert len(traces) == len(protocol_result.traces)
    assert list(pd.read_csv(traces[0]).columns) == ["iteration", "mse"]


def test_rerun_is_byte_identical(quick_run_config, tmp_path):
    """Test two runs with one master seed give byte-identical trials.csv and summary.csv."""
    for name in ("first", "second"):
        ReportWriter.emit_reports(BenchmarkRunner.run_protocol(quick_run_config), str(tmp_path / name))
    for report in ("trials.csv", "summary.csv"):
        assert (tmp_path / "first" / report).read_bytes() == (tmp_path / "second" / report).read_bytes()


def test_rewrite_replaces_previous_reports(protocol_result, tmp_path):
    """Test emitting twice leaves one clean report set and no temp files."""
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    ReportWriter.emit_reports(protocol_result, str(tmp_path))
    assert not [name for name in os.listdir(tmp_path) if name.startswith(".")]


def test_empty_result_rejected(tmp_path):
    """Test an empty result raises InputError and writes nothing."""
    with pytest.raises(InputError):
        ReportWriter.emit_reports(ProtocolResult(), str(tmp_path / "out"))
    assert not (tmp_path / "out").exists()


def test_unwritable_output_dir(protocol_result, tmp_path):
    """Test an output path blocked by a file raises ReportError."""
    blocker = tmp_path / "blocked"
    blocker.write_text("not a directory")
    with pytest.raises(ReportError) as excinfo:
        ReportWriter.emit_reports(protocol_result, str(blocker / "run"))
    assert excinfo.value.exit_code == 5


def test_check_writable_does_not_create(tmp_path):
    """Test check_writable accepts a creatable nested path and leaves it absent."""
    target = tmp_path / "a" / "b"
    assert ReportWriter.check_writable(str(target)) == target
    assert not (tmp_path / "a").exists()


@pytest.mark.parametrize("suffix", ["", "run"])
def test_check_writable_rejects_file_in_path(tmp_path, suffix):
    """Test a regular file at or above the output path raises ReportError."""
    blocker = tmp_path / "blocked"
    blocker.write_text("")
    with pytest.raises(ReportError):
        ReportWriter.check_writable(str(blocker / suffix) if suffix else str(blocker))


def test_error_rows_written(quick_run_config, tmp_path):
    """Test failed trials appear with status error and empty metrics."""

    def failing(run, input_dim, train_set, seed):
        raise RuntimeError("boom")

    trainers = dict(DEFAULT_TRAINERS, flnn_abc=failing)
    result = BenchmarkRunner.run_protocol(quick_run_config, trainers=trainers)
    ReportWriter.emit_reports(result, str(tmp_path))
    trials = pd.read_csv(tmp_path / "trials.csv")
    errors = trials[trials["trainer"] == "flnn_abc"]
    assert (errors["status"] == "error").all()
    assert errors["train_mse"].isna().all()


# ============================================
# History / Params Tests
# ============================================

def test_write_history_epochs_from_one(tmp_path):
    """Test BP history is indexed from epoch 1."""
    ReportWriter.write_history(tmp_path / "h.csv", [0.5, 0.25], "epoch", start=1)
    frame = pd.read_csv(tmp_path / "h.csv")
    assert list(frame.columns) == ["epoch", "mse"]
    assert list(frame["epoch"]) == [1, 2]


def test_write_history_cycles_from_zero(tmp_path):
    """Test ABC traces start at cycle 0 with a best_objective column."""
    ReportWriter.write_history(tmp_path / "t.csv", [3.0, 2.0, 2.0], "cycle")
    frame = pd.read_csv(tmp_path / "t.csv")
    assert list(frame.columns) == ["cycle", "best_objective"]
    assert list(frame["cycle"]) == [0, 1, 2]


def test_params_round_trip(tmp_path):
    """Test saved parameters load back unchanged."""
    params = np.array([0.1, -2.5, 3.0])
    ReportWriter.write_params(tmp_path / "model.json", params)
    np.testing.assert_array_equal(ReportWriter.read_params(tmp_path / "model.json"), params)


@pytest.mark.parametrize("content", ["{\"w\": 1}", "[1, \"a\"]", "not json"])
def test_read_params_rejects_bad_files(tmp_path, content):
    """Test malformed model files raise InputError."""
    path = tmp_path / "model.json"
    path.write_text(content)
    with pytest.raises(InputError):
        ReportWriter.read_params(path)


def test_format_summary_lists_trainers(protocol_result):
    """Test the console summary names every trainer."""
    text = ReportWriter.format_summary(protocol_result)
    for trainer in ("mlp_bp", "flnn_bp", "flnn_abc"):
        assert trainer in text
