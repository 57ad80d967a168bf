"""
Shared pytest fixtures for all tests.
Provides synthetic datasets on disk, small network configs and run configs.
"""
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from flnn_abc.core.models import AbcConfig, BpConfig, DatasetSchema, NetworkConfig, RunConfig
from flnn_abc.services.dataset_loader import Dataset

# numerical examples have uneven run times
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

REPO_ROOT = Path(__file__).resolve().parent.parent
# read before isolated_environment clears it
DATA_DIR = Path(os.getenv("FLNN_ABC_DATA_DIR", REPO_ROOT / "data"))


# ============================================
# Global Fixtures
# ============================================

@pytest.fixture(scope="session")
def repo_root() -> Path:
    """Repository root (holds configs/ and scripts/)."""
    return REPO_ROOT


@pytest.fixture(scope="session")
def data_dir() -> Path:
    """Directory holding the downloaded UCI files, if any."""
    return DATA_DIR


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """Keep developer .env settings out of the tests."""
    monkeypatch.delenv("FLNN_ABC_OUTPUT_DIR", raising=False)
    monkeypatch.delenv("FLNN_ABC_DATA_DIR", raising=False)


# ============================================
# Data Fixtures
# ============================================

def separable_rows(n: int, dim: int, seed: int):
    """Features in [0, 10] labelled by the sign of their centred sum."""
    rng = np.random.default_rng(seed)
    X = np.round(rng.uniform(0.0, 10.0, size=(n, dim)), 1)
    y = np.where(X.sum(axis=1) >= 5.0 * dim, 1.0, -1.0)
    return X, y


@pytest.fixture
def small_dataset() -> Dataset:
    """40 rows, 3 features, roughly balanced +-1 targets."""
    X, y = separable_rows(40, 3, seed=7)
    return Dataset(name="toy", features=X, targets=y, feature_names=("a", "b", "c"))


@pytest.fixture
def cancer_like_file(tmp_path) -> Path:
    """
    Cancer-style file: id, 3 features, target coded 2/4.
    Row 3 carries a '?' in a feature column.
    """
    X, y = separable_rows(30, 3, seed=11)
    lines = []
    for i, (row, label) in enumerate(zip(X, y)):
        cells = [f"{v:g}" for v in row]
        if i == 2:
            cells[1] = "?"
        lines.append(",".join([str(1000 + i), *cells, "4" if label > 0 else "2"]))
    path = tmp_path / "toy_cancer.data"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def cancer_like_schema(cancer_like_file) -> DatasetSchema:
    """Schema matching cancer_like_file."""
    return DatasetSchema(
        name="toy",
        path=str(cancer_like_file),
        columns=["id", "feature", "feature", "feature", "target"],
        label_map={"2": -1, "4": 1},
    )


@pytest.fixture
def toy_config_file(tmp_path, cancer_like_file) -> Path:
    """INI config over the toy file with small budgets for fast CLI runs."""
    path = tmp_path / "toy.ini"
    path.write_text(
        "[run]\n"
        "trials = 2\n"
        "master_seed = 3\n"
        "\n"
        "[bp]\n"
        "max_epochs = 20\n"
        "\n"
        "[abc]\n"
        "colony_size = 6\n"
        "max_cycles = 5\n"
        "\n"
        "[train]\n"
        "dataset = toy\n"
        "trainer = flnn_abc\n"
        "\n"
        "[dataset.toy]\n"
        f"path = {cancer_like_file.name}\n"
        "columns = id, feature*3, target\n"
        "label_map = 2:-1, 4:1\n"
    )
    return path


# ============================================
# Model Fixtures
# ============================================

@pytest.fixture
def flnn_3() -> NetworkConfig:
    """Second-order FLNN over 3 inputs (6 terms, 7 parameters)."""
    return NetworkConfig.flnn(3, order=2)


@pytest.fixture
def mlp_3() -> NetworkConfig:
    """3-3-1 MLP (16 parameters)."""
    return NetworkConfig.mlp(3)


@pytest.fixture
def quick_run_config(cancer_like_schema) -> RunConfig:
    """Protocol config with tiny budgets over the toy dataset."""
    return RunConfig(
        datasets=[cancer_like_schema],
        trials=2,
        master_seed=5,
        bp=BpConfig(max_epochs=15),
        abc=AbcConfig(colony_size=6, max_cycles=4),
    )
