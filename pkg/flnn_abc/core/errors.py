# flnn_abc/core/errors.py
"""
Error types shared by the library and the CLI.
Each error carries the process exit code the CLI returns for it.
"""
from typing import Optional, Sequence


class FlnnAbcError(Exception):
    """Base class for every error raised on purpose by flnn_abc."""

    exit_code = 1


class InputError(FlnnAbcError, ValueError):
    """Dimension mismatch, non-finite value or empty input."""

    exit_code = 1


class ConfigError(FlnnAbcError):
    """Invalid or unparsable configuration."""

    exit_code = 1


class DataError(FlnnAbcError):
    """Dataset ingestion or preprocessing failure."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None):
        self.path = path
        self.row = row
        location = ""
        if path is not None:
            location = f"{path}"
            if row is not None:
                location += f", row {row}"
            location += ": "
        super().__init__(f"{location}{message}")


class UnreadableFileError(DataError):
    pass


class MalformedRowError(DataError):
    pass


class ColumnCountError(DataError):
    pass


class LabelMappingError(DataError):
    pass


class TrainingError(FlnnAbcError):
    """Training diverged or could not proceed."""

    exit_code = 3

    def __init__(self, message: str, epoch: Optional[int] = None):
        self.epoch = epoch
        if epoch is not None:
            message = f"{message} (epoch {epoch})"
        super().__init__(message)


class OptimizerError(TrainingError):
    """Objective returned a non-finite value during an ABC run."""

    def __init__(self, message: str, vector: Sequence[float], cycle: Optional[int] = None):
        self.vector = list(vector)
        preview = ", ".join(f"{v:.6g}" for v in self.vector[:8])
        if len(self.vector) > 8:
            preview += ", ..."
        super().__init__(f"{message} at vector [{preview}]", epoch=cycle)


class RunError(FlnnAbcError):
    """A protocol cell finished without a single successful trial."""

    exit_code = 4


class ReportError(FlnnAbcError):
    """Reports could not be written."""

    exit_code = 5
