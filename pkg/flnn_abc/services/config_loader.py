# flnn_abc/services/config_loader.py
"""
ConfigLoader Service - INI run configuration with command-line overrides.

Sections: [run], [bp], [abc], [train] and one [dataset.<name>] per
dataset. A dataset section may name a built-in `preset` (cancer, pima,
bupa) and then only needs `path`. Values are validated by the pydantic
models in flnn_abc.core.models; any failure becomes a ConfigError before
work starts.

Environment (also read from a .env file):
    FLNN_ABC_OUTPUT_DIR  default output directory
    FLNN_ABC_DATA_DIR    base directory for relative dataset paths
"""
import configparser
import os
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import ValidationError

from flnn_abc.core.errors import ConfigError
from flnn_abc.core.models import AbcConfig, BpConfig, DatasetSchema, RunConfig, TrainSettings
from flnn_abc.services.dataset_loader import DATASET_PRESETS

DEFAULT_OUTPUT_DIR = "runs"
_DATASET_PREFIX = "dataset."
_RUN_KEYS = ("master_seed", "trials", "output_dir", "workers", "order", "save_traces")


def _split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_columns(value: str) -> List[str]:
    """'id, feature*9, target' -> ['id', 'feature', ... , 'target']."""
    roles = []
    for item in _split_list(value):
        role, _, count = item.partition("*")
        roles.extend([role.strip()] * (int(count) if count else 1))
    return roles


def format_columns(roles: Iterable[str]) -> str:
    parts: List[Tuple[str, int]] = []
    for role in roles:
        if parts and parts[-1][0] == role:
            parts[-1] = (role, parts[-1][1] + 1)
        else:
            parts.append((role, 1))
    return ", ".join(role if n == 1 else f"{role}*{n}" for role, n in parts)


def parse_label_map(value: str) -> Dict[str, int]:
    """'2:-1, 4:1' -> {'2': -1, '4': 1}."""
    mapping = {}
    for item in _split_list(value):
        label, sep, code = item.rpartition(":")
        if not sep:
            raise ConfigError(f"label mapping entry {item!r} must look like label:code")
        mapping[label.strip()] = int(code)
    return mapping


class _ConfigLoaderService:
    """Singleton service for reading, overriding and echoing run configuration."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_ConfigLoaderService, cls).__new__(cls)
            load_dotenv()
        return cls._instance

    def read_parser(self, path: Optional[str], overrides: Iterable[str] = ()) -> configparser.ConfigParser:
        parser = configparser.ConfigParser(interpolation=None)
        if path is not None:
            if not Path(path).is_file():
                raise ConfigError(f"config file not found: {path}")
            try:
                parser.read(path, encoding="utf-8")
            except configparser.Error as e:
                raise ConfigError(f"cannot parse {path}: {e}")
        for override in overrides:
            self.apply_override(parser, override)
        return parser

    def apply_override(self, parser: configparser.ConfigParser, override: str) -> None:
        """Apply 'section.option=value'; the option is the text after the last dot."""
        key, sep, value = override.partition("=")
        section, dot, option = key.strip().rpartition(".")
        if not sep or not dot or not section or not option:
            raise ConfigError(f"override {override!r} must look like section.option=value")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value.strip())

    def _dataset_base(self, config_path: Optional[str]) -> Path:
        data_dir = os.getenv("FLNN_ABC_DATA_DIR")
        if data_dir:
            return Path(data_dir)
        if config_path is not None:
            return Path(config_path).resolve().parent
        return Path.cwd()

    def _dataset_schema(self, name: str, section: configparser.SectionProxy, base: Path) -> DatasetSchema:
        fields: Dict[str, object] = {}
        preset = section.get("preset")
        if preset is not None:
            if preset not in DATASET_PRESETS:
                raise ConfigError(f"dataset {name}: unknown preset {preset!r}")
            fields.update({k: v for k, v in DATASET_PRESETS[preset].items() if k != "file_name"})
        for option, value in section.items():
            if option == "preset":
                continue
            if option == "columns":
                fields["columns"] = parse_columns(value)
            elif option == "label_map":
                fields["label_map"] = parse_label_map(value)
            elif option == "feature_names":
                fields["feature_names"] = _split_list(value)
            else:
                fields[option] = value
        if "path" not in fields and preset is not None:
            fields["path"] = DATASET_PRESETS[preset]["file_name"]
        if "path" in fields and not Path(str(fields["path"])).is_absolute():
            fields["path"] = str(base / str(fields["path"]))
        return DatasetSchema(name=name, **fields)

    def build_run_config(self, parser: configparser.ConfigParser, config_path: Optional[str] = None) -> RunConfig:
        dataset_sections = [s for s in parser.sections() if s.startswith(_DATASET_PREFIX)]
        if not dataset_sections:
            raise ConfigError("configuration declares no [dataset.<name>] sections")

        run_section = parser["run"] if parser.has_section("run") else {}
        base = self._dataset_base(config_path)
        try:
            schemas = {
                section[len(_DATASET_PREFIX):]: self._dataset_schema(section[len(_DATASET_PREFIX):], parser[section], base)
                for section in dataset_sections
            }
            selected = _split_list(run_section.get("datasets", "")) or list(schemas)
            unknown = [name for name in selected if name not in schemas]
            if unknown:
                raise ConfigError(f"[run] datasets names undeclared datasets: {', '.join(unknown)}")

            fields: Dict[str, object] = {k: run_section[k] for k in _RUN_KEYS if k in run_section}
            if "trainers" in run_section:
                fields["trainers"] = _split_list(run_section["trainers"])
            abc_fields = dict(parser["abc"]) if parser.has_section("abc") else {}
            if abc_fields.get("limit", None) == "":
                abc_fields.pop("limit")
            return RunConfig(
                datasets=[schemas[name] for name in selected],
                bp=BpConfig(**(dict(parser["bp"]) if parser.has_section("bp") else {})),
                abc=AbcConfig(**abc_fields),
                train=TrainSettings(**(dict(parser["train"]) if parser.has_section("train") else {})),
                **fields,
            )
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}")
        except ValueError as e:
            raise ConfigError(f"invalid configuration: {e}")

    def load(self, path: Optional[str], overrides: Iterable[str] = ()) -> RunConfig:
        return self.build_run_config(self.read_parser(path, overrides), config_path=path)

    def abc_config(self, parser: configparser.ConfigParser) -> AbcConfig:
        fields = dict(parser["abc"]) if parser.has_section("abc") else {}
        if fields.get("limit", None) == "":
            fields.pop("limit")
        try:
            return AbcConfig(**fields)
        except ValidationError as e:
            raise ConfigError(f"invalid [abc] section: {e}")

    def resolve_output_dir(self, cli_value: Optional[str], configured: Optional[str] = None) -> str:
        return cli_value or configured or os.getenv("FLNN_ABC_OUTPUT_DIR") or DEFAULT_OUTPUT_DIR

    def to_parser(self, run: RunConfig) -> configparser.ConfigParser:
        """Fully resolved configuration (defaults included) as INI sections."""
        parser = configparser.ConfigParser(interpolation=None)
        parser["run"] = {
            "datasets": ", ".join(d.name for d in run.datasets),
            "trainers": ", ".join(run.trainers),
            "order": str(run.order),
            "trials": str(run.trials),
            "master_seed": str(run.master_seed),
            "workers": str(run.workers),
            "save_traces": str(run.save_traces).lower(),
        }
        if run.output_dir:
            parser["run"]["output_dir"] = run.output_dir
        parser["bp"] = {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in run.bp.model_dump().items()}
        parser["abc"] = {k: str(v) for k, v in run.abc.model_dump(exclude={"bounds"}).items() if v is not None}
        parser["train"] = {k: str(v) for k, v in run.train.model_dump().items() if v is not None}
        for schema in run.datasets:
            section = {
                "path": schema.path,
                "columns": format_columns(schema.columns),
                "label_map": ", ".join(f"{label}:{code}" for label, code in schema.label_map.items()),
                "header": str(schema.header).lower(),
                "missing_token": schema.missing_token,
                "missing_policy": schema.missing_policy,
            }
            if schema.feature_names:
                section["feature_names"] = ", ".join(schema.feature_names)
            if schema.url:
                section["url"] = schema.url
            parser[f"{_DATASET_PREFIX}{schema.name}"] = section
        return parser

    def write_resolved(self, parser: configparser.ConfigParser, output_dir: Path) -> Path:
        path = Path(output_dir) / "resolved_config.ini"
        with open(path, "w", encoding="utf-8") as handle:
            parser.write(handle)
        return path


# Create singleton instance
ConfigLoader = _ConfigLoaderService()
