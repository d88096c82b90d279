"""
Exception hierarchy shared by every counter-fitting module.

Library code raises these; only the command-line entry point turns them
into exit codes.
"""
from typing import Optional


class CounterFitError(Exception):
    """Base class for all counter-fitting errors."""


class InputValidationError(CounterFitError):
    """Invalid arguments, hyperparameters or word ids."""


class ConfigError(InputValidationError):
    """Invalid configuration file contents."""


class UnknownWordError(InputValidationError):
    """A word is not part of the vector store vocabulary."""

    def __init__(self, word: str):
        super().__init__(f"Unknown word: {word!r}")
        self.word = word


class OntologyError(InputValidationError):
    """Ontology violates its invariants (duplicate slot or value, empty slot)."""


class DataFileError(CounterFitError):
    """Problem with an input or output data file."""


class ParseError(DataFileError):
    """Malformed line in a data file."""

    def __init__(self, path: str, line_number: int, message: str):
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number


class FormatError(DataFileError):
    """Structurally wrong data file (e.g. a missing column)."""


class EmptyVocabularyError(DataFileError):
    """No words left after loading and filtering."""


class VectorIOError(DataFileError):
    """Reading or writing a file failed."""

    def __init__(self, path: str, cause: Optional[BaseException] = None):
        message = f"I/O failure on {path}"
        if cause is not None:
            message += f": {cause}"
        super().__init__(message)
        self.path = path
        self.cause = cause


class GeometryError(CounterFitError):
    """Cosine geometry is undefined (zero-norm row)."""


class CorrelationError(CounterFitError):
    """Rank correlation is undefined (zero rank variance)."""


class EvaluationError(CounterFitError):
    """Nothing to evaluate, or inputs that do not line up."""
