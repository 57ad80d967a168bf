# flnn_abc/services/dataset_loader.py
"""
DatasetLoader Service - ingestion, cleaning and 2-fold splitting of the
UCI benchmark files (Breast Cancer Wisconsin, PIMA Indians Diabetes,
BUPA Liver Disorders).

Files are read as text with pandas so missing-value tokens survive
ingestion as explicit markers; numeric conversion, missing-value policy
and label mapping happen in `preprocess`. Feature scaling is fitted on a
training fold only (see `MinMaxScaler`).
"""
import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from flnn_abc.core.errors import (
    ColumnCountError,
    DataError,
    InputError,
    LabelMappingError,
    MalformedRowError,
    UnreadableFileError,
)
from flnn_abc.core.models import DatasetSchema, FoldAssignment

logger = logging.getLogger(__name__)

_EXCEL_SUFFIXES = {".xlsx", ".xlsm"}


DATASET_PRESETS: Dict[str, dict] = {
    "cancer": {
        "columns": ["id"] + ["feature"] * 9 + ["target"],
        "label_map": {"2": -1, "4": 1},  # 2 benign, 4 malignant
        "feature_names": [
            "clump_thickness",
            "uniformity_cell_size",
            "uniformity_cell_shape",
            "marginal_adhesion",
            "single_epithelial_cell_size",
            "bare_nuclei",
            "bland_chromatin",
            "normal_nucleoli",
            "mitoses",
        ],
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/breast-cancer-wisconsin/breast-cancer-wisconsin.data",
        "file_name": "breast-cancer-wisconsin.data",
    },
    "pima": {
        "columns": ["feature"] * 8 + ["target"],
        "label_map": {"0": -1, "1": 1},  # 1 tested positive for diabetes
        "feature_names": [
            "pregnancies",
            "plasma_glucose",
            "diastolic_blood_pressure",
            "triceps_skin_fold",
            "serum_insulin",
            "body_mass_index",
            "diabetes_pedigree",
            "age",
        ],
        "url": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
        "file_name": "pima-indians-diabetes.data",
    },
    "bupa": {
        "columns": ["feature"] * 6 + ["target"],
        "label_map": {"1": 1, "2": -1},  # selector field
        "feature_names": ["mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks"],
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/liver-disorders/bupa.data",
        "file_name": "bupa.data",
    },
}


def preset_schema(preset: str, path: str, name: Optional[str] = None, **overrides) -> DatasetSchema:
    if preset not in DATASET_PRESETS:
        raise KeyError(preset)
    fields = {k: v for k, v in DATASET_PRESETS[preset].items() if k != "file_name"}
    fields.update(overrides)
    return DatasetSchema(name=name or preset, path=path, **fields)


@dataclass
class RawTable:
    """Text cells as read from disk plus a mask of missing-value tokens."""

    path: str
    cells: pd.DataFrame
    missing: pd.DataFrame
    first_line: int = 1

    @property
    def row_count(self) -> int:
        return len(self.cells)

    def line_of(self, position: int) -> int:
        return position + self.first_line

    @property
    def missing_rows(self) -> int:
        return int(self.missing.any(axis=1).sum())


@dataclass(frozen=True)
class Dataset:
    name: str
    features: np.ndarray
    targets: np.ndarray
    feature_names: Tuple[str, ...] = ()
    dropped_rows: int = 0

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[0] != self.targets.shape[0]:
            raise InputError(
                f"{self.name}: features {self.features.shape} and targets {self.targets.shape} disagree"
            )
        if self.features.shape[0] == 0:
            raise InputError(f"{self.name}: dataset is empty")
        if not np.all(np.isfinite(self.features)):
            raise InputError(f"{self.name}: features contain non-finite values")
        if not np.all(np.isin(self.targets, (-1.0, 1.0))):
            raise InputError(f"{self.name}: targets must be -1 or +1")

    @property
    def row_count(self) -> int:
        return self.features.shape[0]

    @property
    def input_dim(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            name=self.name,
            features=self.features[indices],
            targets=self.targets[indices],
            feature_names=self.feature_names,
        )

    def with_features(self, features: np.ndarray) -> "Dataset":
        return Dataset(self.name, features, self.targets, self.feature_names, self.dropped_rows)


@dataclass(frozen=True)
class FoldPair:
    fold_a: np.ndarray
    fold_b: np.ndarray

    def assignment(self, which: FoldAssignment) -> Tuple[np.ndarray, np.ndarray]:
        """(train indices, test indices); 'a' trains on fold A."""
        if which == "a":
            return self.fold_a, self.fold_b
        return self.fold_b, self.fold_a


@dataclass
class MinMaxScaler:
    """
    Per-column min-max scaling to [-1, 1].

    Fitted on a training fold; test folds scaled with the same statistics
    may fall outside [-1, 1] and are left unclipped.
    """

    low: float = -1.0
    high: float = 1.0
    mins: Optional[np.ndarray] = None
    ranges: Optional[np.ndarray] = None
    constant_columns: List[int] = field(default_factory=list)

    def fit(self, features: np.ndarray, names: Tuple[str, ...] = ()) -> "MinMaxScaler":
        self.mins = features.min(axis=0)
        self.ranges = features.max(axis=0) - self.mins
        self.constant_columns = [int(c) for c in np.flatnonzero(self.ranges == 0)]
        for col in self.constant_columns:
            label = names[col] if col < len(names) else f"column {col}"
            logger.warning(f"Feature {label} is constant on the training fold; scaling it to 0")
        return self

    def transform(self, features: np.ndarray) -> np.ndarray:
        if self.mins is None:
            raise InputError("MinMaxScaler.transform called before fit")
        safe = np.where(self.ranges == 0, 1.0, self.ranges)
        unit = (features - self.mins) / safe
        scaled = self.low + unit * (self.high - self.low)
        midpoint = (self.low + self.high) / 2.0
        scaled[:, self.ranges == 0] = midpoint
        return scaled


class _DatasetLoaderService:
    """Singleton service for reading and preparing benchmark datasets."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_DatasetLoaderService, cls).__new__(cls)
        return cls._instance

    def load_csv(self, path: str, schema: DatasetSchema) -> RawTable:
        """
        Read a comma-separated (or .xlsx) file into text cells.

        Args:
            path: File to read
            schema: Declares the column count, header toggle and missing token

        Returns:
            RawTable with one row per record and a boolean missing mask

        Raises:
            UnreadableFileError, MalformedRowError, ColumnCountError
        """
        source = Path(path)
        first_line = 2 if schema.header else 1
        try:
            if source.suffix.lower() in _EXCEL_SUFFIXES:
                frame = pd.read_excel(
                    source, header=0 if schema.header else None, dtype=str, engine="openpyxl"
                )
            else:
                frame = pd.read_csv(
                    source,
                    header=0 if schema.header else None,
                    dtype=str,
                    keep_default_na=False,
                    skipinitialspace=True,
                )
        except FileNotFoundError:
            raise UnreadableFileError("file not found", path=str(path))
        except pd.errors.EmptyDataError:
            raise MalformedRowError("file contains no records", path=str(path))
        except pd.errors.ParserError as e:
            match = re.search(r"line (\d+)", str(e))
            row = int(match.group(1)) if match else None
            raise MalformedRowError(f"could not parse record: {e}", path=str(path), row=row)
        except (OSError, UnicodeDecodeError, ValueError) as e:
            raise UnreadableFileError(f"cannot read file: {e}", path=str(path))

        if frame.shape[1] != schema.column_count:
            raise ColumnCountError(
                f"expected {schema.column_count} columns, found {frame.shape[1]}",
                path=str(path),
                row=first_line,
            )
        if source.suffix.lower() in _EXCEL_SUFFIXES:
            # openpyxl pads short rows with NaN
            short = frame.isna().any(axis=1).to_numpy()
            line = int(np.flatnonzero(short)[0]) + first_line if short.any() else None
        else:
            line = self._first_short_record(source, first_line, schema.column_count)
        if line is not None:
            raise ColumnCountError(f"expected {schema.column_count} columns", path=str(path), row=line)

        frame.columns = range(schema.column_count)
        cells = frame.apply(lambda col: col.astype(str).str.strip())
        missing = cells == schema.missing_token
        return RawTable(path=str(path), cells=cells.reset_index(drop=True), missing=missing.reset_index(drop=True), first_line=first_line)

    def _first_short_record(self, source: Path, first_line: int, column_count: int) -> Optional[int]:
        """File line of the first record with fewer fields than declared, if any."""
        try:
            with open(source, newline="", encoding="utf-8") as handle:
                reader = csv.reader(handle, skipinitialspace=True)
                for record in reader:
                    if reader.line_num < first_line or not record:
                        continue
                    if len(record) < column_count:
                        return reader.line_num
        except (OSError, UnicodeDecodeError) as e:
            raise UnreadableFileError(f"cannot read file: {e}", path=str(source))
        return None

    def _map_label(self, value: str, schema: DatasetSchema, line: int, path: str) -> int:
        if value in schema.label_map:
            return schema.label_map[value]
        try:
            as_float = float(value)
        except ValueError:
            as_float = None
        if as_float is not None and as_float.is_integer() and str(int(as_float)) in schema.label_map:
            return schema.label_map[str(int(as_float))]
        raise LabelMappingError(f"label {value!r} has no declared mapping", path=path, row=line)

    def preprocess(self, raw: RawTable, schema: DatasetSchema, policy: Optional[str] = None) -> Dataset:
        """
        Turn raw cells into a Dataset of unscaled float features and +-1 targets.

        Args:
            raw: Table returned by load_csv
            schema: Column roles and label mapping
            policy: 'drop' (default from schema) or 'median'

        Returns:
            Dataset; rows with a missing target are always dropped
        """
        policy = policy or schema.missing_policy
        if policy not in ("drop", "median"):
            raise DataError(f"unknown missing-value policy {policy!r}", path=raw.path)

        feature_cols = schema.feature_columns
        target_col = schema.target_column

        target_missing = raw.missing[target_col].to_numpy()
        feature_missing = raw.missing[feature_cols].any(axis=1).to_numpy()
        keep = ~target_missing
        if policy == "drop":
            keep &= ~feature_missing

        features = np.empty((raw.row_count, len(feature_cols)))
        for out_col, col in enumerate(feature_cols):
            for position, value in enumerate(raw.cells[col]):
                if raw.missing.iat[position, col]:
                    features[position, out_col] = np.nan
                    continue
                try:
                    features[position, out_col] = float(value)
                except ValueError:
                    raise MalformedRowError(
                        f"non-numeric value {value!r} in column {col + 1}",
                        path=raw.path,
                        row=raw.line_of(position),
                    )

        if policy == "median":
            medians = np.nanmedian(features[keep], axis=0)
            rows, cols = np.nonzero(np.isnan(features) & keep[:, np.newaxis])
            features[rows, cols] = medians[cols]

        targets = np.array(
            [
                self._map_label(raw.cells.iat[position, target_col], schema, raw.line_of(position), raw.path)
                if keep[position]
                else 0
                for position in range(raw.row_count)
            ],
            dtype=float,
        )

        dropped = int((~keep).sum())
        if dropped:
            logger.warning(f"{schema.name}: dropped {dropped} rows with missing values")
        kept_rows = int(keep.sum())
        if kept_rows < 2:
            raise DataError(f"only {kept_rows} usable rows after preprocessing", path=raw.path)

        names = tuple(schema.feature_names) if schema.feature_names else tuple(
            f"x{i + 1}" for i in range(len(feature_cols))
        )
        return Dataset(
            name=schema.name,
            features=features[keep],
            targets=targets[keep],
            feature_names=names,
            dropped_rows=dropped,
        )

    def load(self, schema: DatasetSchema) -> Dataset:
        return self.preprocess(self.load_csv(schema.path, schema), schema)

    def two_fold_split(self, dataset: Dataset, seed: int) -> FoldPair:
        """Random halving; with an odd row count fold A gets the extra row."""
        n = dataset.row_count
        if n < 2:
            raise InputError(f"{dataset.name}: need at least 2 rows to split, got {n}")
        order = np.random.default_rng(seed).permutation(n)
        half = (n + 1) // 2
        return FoldPair(fold_a=np.sort(order[:half]), fold_b=np.sort(order[half:]))

    def scale_fold_pair(
        self, dataset: Dataset, folds: FoldPair, assignment: FoldAssignment
    ) -> Tuple[Dataset, Dataset]:
        """Training and test sets for one fold assignment, scaled on the training fold."""
        train_idx, test_idx = folds.assignment(assignment)
        train, test = dataset.subset(train_idx), dataset.subset(test_idx)
        scaler = MinMaxScaler().fit(train.features, dataset.feature_names)
        return train.with_features(scaler.transform(train.features)), test.with_features(
            scaler.transform(test.features)
        )


# Create singleton instance
DatasetLoader = _DatasetLoaderService()
