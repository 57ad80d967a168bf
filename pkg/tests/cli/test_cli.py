"""
Test the command-line interface (main.py and cli/).
Runs subcommands in-process through main(argv) and checks exit codes and artifacts.
"""
import configparser
import json

import numpy as np
import pandas as pd
import pytest

from flnn_abc.main import build_parser, main
from flnn_abc.services.benchmark import DEFAULT_TRAINERS, network_for
from flnn_abc.services.bp_trainer import BackpropTrainer


def _diverging_flnn_bp(run, input_dim, train_set, seed):
    """flnn_bp on features blown up to 1e200, which overflows in the first epoch."""
    network = network_for(run, "flnn_bp", input_dim)
    huge = train_set.with_features(np.full_like(train_set.features, 1e200))
    return network, BackpropTrainer.train(network, run.bp.model_copy(update={"seed": seed}), huge)


def _cancer_format_file(tmp_path):
    """Cancer-layout file: id, 9 features in 1..10, class 2 or 4."""
    rng = np.random.default_rng(21)
    X = rng.integers(1, 11, size=(60, 9))
    labels = np.where(X.sum(axis=1) > 50, 4, 2)
    path = tmp_path / "breast-cancer-wisconsin.data"
    path.write_text("\n".join(",".join(map(str, [1000 + i, *row, label])) for i, (row, label) in enumerate(zip(X, labels))) + "\n")
    return path


# ============================================
# Parser Tests
# ============================================

def test_parser_knows_every_subcommand():
    """Test train, evaluate, benchmark and abc-demo are registered."""
    parser = build_parser()
    for command in ("train", "evaluate", "benchmark", "abc-demo"):
        args = parser.parse_args([command])
        assert args.command == command


def test_unknown_subcommand_exits_1():
    """Test usage errors exit with status 1."""
    with pytest.raises(SystemExit) as excinfo:
        main(["fly"])
    assert excinfo.value.code == 1


def test_quiet_and_verbose_are_exclusive():
    """Test --quiet and --verbose cannot be combined."""
    with pytest.raises(SystemExit) as excinfo:
        main(["benchmark", "--quiet", "--verbose"])
    assert excinfo.value.code == 1


# ============================================
# train / evaluate Tests
# ============================================

def test_train_flnn_abc(toy_config_file, tmp_path, capsys):
    """Test train writes model.json, a cycle history and the resolved config."""
    out = tmp_path / "out"
    assert main(["train", "--config", str(toy_config_file), "--out", str(out)]) == 0

    params = json.loads((out / "model.json").read_text())
    assert len(params) == 7
    history = pd.read_csv(out / "history.csv")
    assert list(history.columns) == ["cycle", "best_objective"]
    assert (out / "resolved_config.ini").exists()
    assert "test_accuracy_pct" in capsys.readouterr().out


def test_train_mlp_bp_history_in_epochs(toy_config_file, tmp_path):
    """Test BP training writes an epoch-indexed history."""
    out = tmp_path / "out"
    code = main(["train", "--config", str(toy_config_file), "--out", str(out), "--set", "train.trainer=mlp_bp"])
    assert code == 0
    history = pd.read_csv(out / "history.csv")
    assert list(history.columns) == ["epoch", "mse"]
    assert history["epoch"].iloc[0] == 1
    assert len(json.loads((out / "model.json").read_text())) == 16


def test_train_cancer_preset_has_46_parameters(tmp_path):
    """Test FLNN-ABC on a cancer-layout file saves 46 parameters."""
    data = _cancer_format_file(tmp_path)
    config = tmp_path / "cancer.ini"
    config.write_text(
        "[abc]\ncolony_size = 6\nmax_cycles = 3\n"
        "[train]\ntrainer = flnn_abc\n"
        f"[dataset.cancer]\npreset = cancer\npath = {data.name}\n"
    )
    out = tmp_path / "out"
    assert main(["train", "--config", str(config), "--out", str(out)]) == 0
    assert len(json.loads((out / "model.json").read_text())) == 46


def test_train_missing_dataset_exits_2(toy_config_file, tmp_path, capsys):
    """Test a missing data file exits with status 2 and writes no model."""
    out = tmp_path / "out"
    code = main(
        ["train", "--config", str(toy_config_file), "--out", str(out), "--set", "dataset.toy.path=absent.csv"]
    )
    assert code == 2
    assert "Error:" in capsys.readouterr().err
    assert not out.exists()


def test_benchmark_missing_dataset_leaves_no_output_dir(toy_config_file, tmp_path):
    """Test a data error during benchmark leaves the output directory uncreated."""
    out = tmp_path / "bench"
    code = main(
        ["benchmark", "--config", str(toy_config_file), "--out", str(out), "--set", "dataset.toy.path=absent.csv"]
    )
    assert code == 2
    assert not out.exists()


def test_train_unknown_trainer_exits_1(toy_config_file, tmp_path):
    """Test an unknown trainer id exits with status 1."""
    code = main(["train", "--config", str(toy_config_file), "--out", str(tmp_path), "--set", "train.trainer=svm"])
    assert code == 1


def test_train_without_trainer_exits_1(toy_config_file, tmp_path):
    """Test a blank [train] trainer exits with status 1."""
    toy_config_file.write_text(toy_config_file.read_text().replace("trainer = flnn_abc\n", ""))
    assert main(["train", "--config", str(toy_config_file), "--out", str(tmp_path)]) == 1


def test_train_divergence_exits_3(toy_config_file, tmp_path, monkeypatch, capsys):
    """Test a diverging BP run exits with status 3 and saves no model."""
    monkeypatch.setitem(DEFAULT_TRAINERS, "flnn_bp", _diverging_flnn_bp)
    out = tmp_path / "out"
    code = main(["train", "--config", str(toy_config_file), "--out", str(out), "--set", "train.trainer=flnn_bp"])
    assert code == 3
    assert "diverged" in capsys.readouterr().err
    assert not (out / "model.json").exists()


def test_train_seed_flag_changes_weights(toy_config_file, tmp_path):
    """Test --seed reseeds training."""
    for seed in ("1", "2"):
        assert main(["train", "--config", str(toy_config_file), "--out", str(tmp_path / seed), "--seed", seed]) == 0
    first = json.loads((tmp_path / "1" / "model.json").read_text())
    second = json.loads((tmp_path / "2" / "model.json").read_text())
    assert first != second


def test_evaluate_reproduces_training_metrics(toy_config_file, tmp_path, capsys):
    """Test evaluate prints the same metrics as train for the saved model."""
    out = tmp_path / "out"
    main(["train", "--config", str(toy_config_file), "--out", str(out)])
    trained = [line for line in capsys.readouterr().out.splitlines() if line.startswith(("train_", "test_"))]

    assert main(["evaluate", "--config", str(toy_config_file), "--out", str(out)]) == 0
    evaluated = [line for line in capsys.readouterr().out.splitlines() if line.startswith(("train_", "test_"))]
    assert trained == evaluated


def test_evaluate_wrong_model_length_exits_1(toy_config_file, tmp_path):
    """Test a model file that does not fit the network exits with status 1."""
    model = tmp_path / "bad.json"
    model.write_text("[0.1, 0.2]")
    code = main(["evaluate", "--config", str(toy_config_file), "--out", str(tmp_path), "--model", str(model)])
    assert code == 1


# ============================================
# benchmark Tests
# ============================================

def test_benchmark_writes_reports(toy_config_file, tmp_path, capsys):
    """Test benchmark writes the report set and prints one summary row per trainer."""
    out = tmp_path / "bench"
    assert main(["benchmark", "--config", str(toy_config_file), "--out", str(out)]) == 0
    summary = pd.read_csv(out / "summary.csv")
    assert len(summary) == 3
    assert (out / "resolved_config.ini").exists()
    printed = capsys.readouterr().out
    for trainer in ("mlp_bp", "flnn_bp", "flnn_abc"):
        assert trainer in printed


def test_benchmark_trials_flag(toy_config_file, tmp_path):
    """Test --trials 1 still yields one summary row per trainer."""
    out = tmp_path / "bench"
    assert main(["benchmark", "--config", str(toy_config_file), "--out", str(out), "--trials", "1"]) == 0
    assert len(pd.read_csv(out / "trials.csv")) == 3 * 2
    assert len(pd.read_csv(out / "summary.csv")) == 3


def test_benchmark_empty_config_exits_1(tmp_path):
    """Test a config without datasets exits with status 1."""
    config = tmp_path / "empty.ini"
    config.write_text("")
    assert main(["benchmark", "--config", str(config), "--out", str(tmp_path / "x")]) == 1


def test_benchmark_unwritable_output_exits_5(toy_config_file, tmp_path):
    """Test an output path blocked by a file exits with status 5 before training."""
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["benchmark", "--config", str(toy_config_file), "--out", str(blocker / "run")]) == 5


def test_benchmark_failed_cell_exits_4(toy_config_file, tmp_path, monkeypatch):
    """Test a cell without successful trials exits with status 4 after writing reports."""
    monkeypatch.setitem(DEFAULT_TRAINERS, "flnn_bp", _diverging_flnn_bp)
    out = tmp_path / "bench"
    code = main(["benchmark", "--config", str(toy_config_file), "--out", str(out), "--set", "run.trainers=flnn_bp"])
    assert code == 4
    assert (pd.read_csv(out / "summary.csv")["status"] == "error").all()


# ============================================
# abc-demo Tests
# ============================================

def test_abc_demo_sphere(tmp_path, capsys):
    """Test the sphere demo converges below 1e-2 and writes its trace."""
    assert main(["abc-demo", "--function", "sphere", "--dim", "5", "--out", str(tmp_path), "--seed", "0"]) == 0
    trace = pd.read_csv(tmp_path / "trace.csv")
    assert list(trace.columns) == ["cycle", "best_objective"]
    assert trace["best_objective"].iloc[-1] < 1e-2
    assert "best_objective" in capsys.readouterr().out


def test_abc_demo_rastrigin_non_negative(tmp_path):
    """Test the rastrigin demo never reports a value below 0."""
    assert main(["abc-demo", "--function", "rastrigin", "--dim", "2", "--out", str(tmp_path)]) == 0
    assert (pd.read_csv(tmp_path / "trace.csv")["best_objective"] >= 0).all()


def test_abc_demo_reads_abc_section(tmp_path):
    """Test [abc] settings from --config and --set reach the colony."""
    config = tmp_path / "abc.ini"
    config.write_text("[abc]\ncolony_size = 4\nmax_cycles = 7\nmin_error = 0\n")
    assert main(["abc-demo", "--config", str(config), "--out", str(tmp_path), "--set", "abc.max_cycles=3"]) == 0
    assert len(pd.read_csv(tmp_path / "trace.csv")) == 4


def test_abc_demo_fills_missing_bound_from_function(tmp_path):
    """Test a lone [abc] lower keeps the function's own upper bound."""
    config = tmp_path / "abc.ini"
    config.write_text("[abc]\nlower = -1\ncolony_size = 4\nmax_cycles = 2\n")
    assert main(["abc-demo", "--function", "rastrigin", "--config", str(config), "--out", str(tmp_path / "o")]) == 0
    resolved = configparser.ConfigParser()
    resolved.read(tmp_path / "o" / "resolved_config.ini")
    assert float(resolved["abc"]["lower"]) == -1.0
    assert float(resolved["abc"]["upper"]) == 5.12


@pytest.mark.parametrize("argv", [["--function", "himmelblau"], ["--dim", "0"]])
def test_abc_demo_bad_arguments_exit_1(tmp_path, argv):
    """Test an unknown function or dimension 0 exits with status 1."""
    assert main(["abc-demo", "--out", str(tmp_path), *argv]) == 1
