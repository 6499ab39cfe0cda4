"""Exception hierarchy shared by every viewpulse package."""

from typing import Optional


class ViewPulseError(Exception):
    """Base class for all recoverable viewpulse failures."""


class ConfigError(ViewPulseError):
    """Raised when a configuration key or value cannot be resolved."""


class DimensionError(ViewPulseError, ValueError):
    """Raised when array shapes do not conform for an operation."""

    def __init__(self, operation: str, *shapes: tuple, detail: str = ""):
        rendered = " vs ".join(str(tuple(shape)) for shape in shapes)
        message = f"{operation}: shape mismatch {rendered}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.operation = operation
        self.shapes = shapes


class NonFiniteError(ViewPulseError, ArithmeticError):
    """Raised when a computation produces NaN or infinite values."""


class FormatError(ViewPulseError):
    """Raised when a binary or text artifact has an unexpected layout."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class TruncatedFileError(FormatError):
    """Raised when a file ends before its declared payload."""


class CorruptCheckpointError(FormatError):
    """Raised when a checkpoint's contents disagree with its model spec."""


class UndefinedCorrelationError(ViewPulseError, ValueError):
    """Raised when a correlation is undefined for constant or zero series."""


class DegenerateSeriesError(ViewPulseError, ValueError):
    """Raised when a series cannot be standardized."""


class MissingModalityError(ViewPulseError):
    """Raised when a model requires a modality that was not supplied."""


class LengthMismatchError(ViewPulseError, ValueError):
    """Raised when aligned series have different lengths."""


class DataMissingError(ViewPulseError):
    """Raised when an episode or one of its files is not available."""


class TrainingDivergedError(ViewPulseError):
    """Raised when training produces a non-finite loss."""
