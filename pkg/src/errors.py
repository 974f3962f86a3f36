"""
Exception hierarchy for the sense change system.
"""
from typing import Optional


class SenseChangeError(Exception):
    """Base class for all errors raised by the pipeline."""


class ConfigurationError(SenseChangeError):
    """Invalid or inconsistent configuration."""


class CorpusParseError(SenseChangeError):
    """A dataset file could not be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_number = line_number


class CorpusValidationError(SenseChangeError):
    """Loaded data violates a dataset invariant."""


class SerializationError(SenseChangeError):
    """Records cannot be written in the requested format."""


class EncodingError(SenseChangeError):
    """A text pair cannot be encoded for the scorer."""


class ScorerNotReadyError(SenseChangeError):
    """The scorer was used before a model was loaded."""


class TrainingDataError(SenseChangeError):
    """Training or development data is unusable."""


class AssignmentError(SenseChangeError):
    """Sense assignment received inconsistent inputs."""


class TransportError(SenseChangeError):
    """HTTP request failed after all retries."""


class ExtractionError(SenseChangeError):
    """An existing dictionary page could not be parsed."""

    def __init__(self, message: str, title: str):
        super().__init__(f"{title}: {message}")
        self.title = title


class MetricInputError(SenseChangeError):
    """Metric inputs are malformed (length mismatch, empty reference)."""
