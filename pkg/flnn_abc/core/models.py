# flnn_abc/core/models.py
from enum import Enum, IntEnum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


TrainerId = Literal["mlp_bp", "flnn_bp", "flnn_abc"]
FoldAssignment = Literal["a", "b"]
TRAINER_IDS: Tuple[str, ...] = ("mlp_bp", "flnn_bp", "flnn_abc")


class IndexPolicy(str, Enum):
    DISTINCT = "distinct_indices"  # i < j < k
    WITH_REPEATS = "with_repeats"  # i <= j <= k


class NetworkKind(str, Enum):
    FLNN = "flnn"
    MLP = "mlp"


class Activation(str, Enum):
    TANH = "tanh"


class ClassLabel(IntEnum):
    NEGATIVE = -1
    POSITIVE = 1


class ExpansionSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_dim: int = Field(ge=1)
    order: int = Field(default=2, ge=1)
    index_policy: IndexPolicy = IndexPolicy.DISTINCT


class NetworkConfig(BaseModel):
    """
    Architecture descriptor for either network family.

    FLNN carries an ExpansionSpec; MLP carries input and hidden sizes.
    Both have a single tanh output node.
    """

    model_config = ConfigDict(frozen=True)

    kind: NetworkKind
    expansion: Optional[ExpansionSpec] = None
    input_dim: Optional[int] = Field(default=None, ge=1)
    hidden_dim: Optional[int] = Field(default=None, ge=1)
    output_dim: Literal[1] = 1
    activation: Activation = Activation.TANH
    hidden_activation: Activation = Activation.TANH

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "NetworkConfig":
        if self.kind == NetworkKind.FLNN:
            if self.expansion is None:
                raise ValueError("flnn network requires an expansion spec")
            if self.input_dim is not None and self.input_dim != self.expansion.input_dim:
                raise ValueError("input_dim disagrees with expansion.input_dim")
        else:
            if self.input_dim is None or self.hidden_dim is None:
                raise ValueError("mlp network requires input_dim and hidden_dim")
        return self

    @classmethod
    def flnn(
        cls,
        input_dim: int,
        order: int = 2,
        index_policy: IndexPolicy = IndexPolicy.DISTINCT,
    ) -> "NetworkConfig":
        return cls(
            kind=NetworkKind.FLNN,
            expansion=ExpansionSpec(input_dim=input_dim, order=order, index_policy=index_policy),
        )

    @classmethod
    def mlp(cls, input_dim: int, hidden_dim: Optional[int] = None) -> "NetworkConfig":
        # hidden width defaults to the input width
        return cls(kind=NetworkKind.MLP, input_dim=input_dim, hidden_dim=hidden_dim or input_dim)

    @property
    def raw_input_dim(self) -> int:
        if self.kind == NetworkKind.FLNN:
            return self.expansion.input_dim
        return self.input_dim

    @property
    def structure(self) -> str:
        """Layer sizes joined by dashes, e.g. '45-1' or '9-9-1'."""
        if self.kind == NetworkKind.FLNN:
            from flnn_abc.core.expansion import expanded_dim

            return f"{expanded_dim(self.expansion)}-{self.output_dim}"
        return f"{self.input_dim}-{self.hidden_dim}-{self.output_dim}"


class BpConfig(BaseModel):
    learning_rate: float = Field(default=0.3, gt=0)
    momentum: float = Field(default=0.7, ge=0, lt=1)
    max_epochs: int = Field(default=1000, ge=1)
    min_error: float = Field(default=0.001, ge=0)
    init_low: float = -1.0
    init_high: float = 1.0
    online: bool = False
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_init_range(self) -> "BpConfig":
        if self.init_low > self.init_high:
            raise ValueError("init_low must not exceed init_high")
        return self


class AbcConfig(BaseModel):
    """
    Artificial Bee Colony settings.

    `bounds` overrides the scalar lower/upper box per dimension when given.
    `limit` left unset resolves to colony_size * dim.
    """

    colony_size: int = Field(default=50, ge=2)
    dim: Optional[int] = Field(default=None, ge=1)
    lower: float = -10.0
    upper: float = 10.0
    bounds: Optional[List[Tuple[float, float]]] = None
    max_cycles: int = Field(default=100, ge=0)
    min_error: float = Field(default=0.001, ge=0)
    limit: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_bounds(self) -> "AbcConfig":
        if self.bounds is None:
            if not self.lower < self.upper:
                raise ValueError("lower must be strictly below upper")
        else:
            if self.dim is not None and len(self.bounds) != self.dim:
                raise ValueError("bounds length must equal dim")
            for low, high in self.bounds:
                if not low < high:
                    raise ValueError(f"degenerate bound [{low}, {high}]")
        return self

    def resolved_dim(self) -> int:
        if self.dim is not None:
            return self.dim
        if self.bounds is not None:
            return len(self.bounds)
        raise ValueError("AbcConfig.dim is not set")

    def resolved_limit(self) -> int:
        if self.limit is not None:
            return self.limit
        return self.colony_size * self.resolved_dim()


class FoodSource(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: Tuple[float, ...]
    objective: float
    fitness: float = Field(gt=0)
    trial_counter: int = Field(ge=0)


class DatasetSchema(BaseModel):
    """
    How to read one benchmark file.

    `columns` lists the role of every column in file order:
    'id', 'feature' or 'target'.
    """

    name: str
    path: str
    columns: List[Literal["id", "feature", "target"]]
    label_map: Dict[str, int]
    header: bool = False
    missing_token: str = "?"
    missing_policy: Literal["drop", "median"] = "drop"
    feature_names: Optional[List[str]] = None
    url: Optional[str] = None

    @field_validator("label_map")
    @classmethod
    def _labels_are_signs(cls, value: Dict[str, int]) -> Dict[str, int]:
        if not value:
            raise ValueError("label_map must not be empty")
        for label, code in value.items():
            if code not in (-1, 1):
                raise ValueError(f"label {label!r} must map to -1 or +1, got {code}")
        return value

    @model_validator(mode="after")
    def _check_roles(self) -> "DatasetSchema":
        if self.columns.count("target") != 1:
            raise ValueError("schema needs exactly one target column")
        if "feature" not in self.columns:
            raise ValueError("schema needs at least one feature column")
        if self.feature_names is not None and len(self.feature_names) != self.feature_count:
            raise ValueError("feature_names length must equal the feature column count")
        return self

    @property
    def column_count(self) -> int:
        return len(self.columns)

    @property
    def feature_count(self) -> int:
        return self.columns.count("feature")

    @property
    def feature_columns(self) -> List[int]:
        return [i for i, role in enumerate(self.columns) if role == "feature"]

    @property
    def target_column(self) -> int:
        return self.columns.index("target")


class TrainSettings(BaseModel):
    """Single-run selection used by the train and evaluate commands."""

    dataset: Optional[str] = None
    trainer: Optional[TrainerId] = None
    fold: FoldAssignment = "a"
    seed: int = Field(default=0, ge=0)


class RunConfig(BaseModel):
    datasets: List[DatasetSchema] = Field(min_length=1)
    trainers: List[TrainerId] = Field(default_factory=lambda: list(TRAINER_IDS), min_length=1)
    bp: BpConfig = Field(default_factory=BpConfig)
    abc: AbcConfig = Field(default_factory=AbcConfig)
    train: TrainSettings = Field(default_factory=TrainSettings)
    order: int = Field(default=2, ge=1)
    trials: int = Field(default=10, ge=1)
    master_seed: int = Field(default=0, ge=0)
    output_dir: Optional[str] = None
    workers: int = Field(default=1, ge=1)
    save_traces: bool = False

    @model_validator(mode="after")
    def _unique_names(self) -> "RunConfig":
        names = [d.name for d in self.datasets]
        if len(names) != len(set(names)):
            raise ValueError("dataset names must be unique")
        return self

    def dataset(self, name: str) -> DatasetSchema:
        for schema in self.datasets:
            if schema.name == name:
                return schema
        raise KeyError(name)


class TrialReport(BaseModel):
    dataset: str
    trainer: TrainerId
    fold: FoldAssignment
    trial: int = Field(ge=0)
    seed: int
    status: Literal["success", "error"] = "success"
    train_mse: Optional[float] = Field(default=None, ge=0)
    train_accuracy_pct: Optional[float] = Field(default=None, ge=0, le=100)
    test_mse: Optional[float] = Field(default=None, ge=0)
    test_accuracy_pct: Optional[float] = Field(default=None, ge=0, le=100)
    iterations: Optional[int] = Field(default=None, ge=0)
    wall_time_s: float = Field(default=0.0, ge=0)
    error: Optional[str] = None

    @model_validator(mode="after")
    def _metrics_present_on_success(self) -> "TrialReport":
        if self.status == "success":
            missing = [
                name
                for name in ("train_mse", "train_accuracy_pct", "test_mse", "test_accuracy_pct", "iterations")
                if getattr(self, name) is None
            ]
            if missing:
                raise ValueError(f"successful trial is missing {missing}")
        return self


class SelectionReport(BaseModel):
    dataset: str
    trainer: TrainerId
    fold: FoldAssignment
    status: Literal["success", "error"]
    trial: Optional[int] = None
    seed: Optional[int] = None
    train_mse: Optional[float] = None
    train_accuracy_pct: Optional[float] = None
    test_mse: Optional[float] = None
    test_accuracy_pct: Optional[float] = None
    successful_trials: int = 0
    error: Optional[str] = None


class SummaryRow(BaseModel):
    dataset: str
    trainer: TrainerId
    status: Literal["success", "error"]
    train_mse: Optional[float] = None
    train_accuracy_pct: Optional[float] = None
    test_mse: Optional[float] = None
    test_accuracy_pct: Optional[float] = None
    error: Optional[str] = None


class ComplexityRow(BaseModel):
    dataset: str
    network_type: str
    structure: str
    param_count: int
    reference_param_count: Optional[int] = None
    note: str = ""
