"""Exception hierarchy shared by all mfnet modules.

``DataError`` covers malformed inputs, files and shape problems;
``NumericError`` covers failures of the numerical procedure itself.
The CLI maps these groups to distinct exit codes.
"""


class MFNetError(Exception):
    """Base class for all mfnet errors."""


class DataError(MFNetError):
    """Invalid input data, file contents, or dimensions."""


class NumericError(MFNetError):
    """Numerical procedure failed (divergence, non-finite values)."""


class InvalidSample(DataError):
    """A sample carries a non-finite parameter or an unknown label."""


class InvalidInput(DataError):
    """Arguments violate an operation's contract."""


class DimensionMismatch(InvalidInput):
    """Array dimensions are inconsistent with the expected layout."""


class InsufficientData(DataError):
    """Too few samples to perform the operation."""


class DegenerateFeature(DataError):
    """A feature column has zero variance and cannot be standardized."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"feature column {column} is constant (zero variance)")


class DivergedTraining(NumericError):
    """Training produced a non-finite cost or weights."""

    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"training diverged at iteration {iteration}")


class MissingHeader(DataError):
    """CSV file lacks the required header line."""


class BadRow(DataError):
    """CSV row is malformed or contains non-finite values."""

    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class UnknownLabel(DataError):
    """CSV row carries a label outside {1, 2, 3}."""

    def __init__(self, line: int, value: str):
        self.line = line
        super().__init__(f"line {line}: unknown class label {value!r}")


class BadMagic(DataError):
    """Model file does not start with the expected magic string."""


class VersionUnsupported(DataError):
    """Model file declares a format version this build cannot read."""


class ShapeMismatch(DataError):
    """Model file blocks do not match the declared topology."""


class ParseError(DataError):
    """Model file contains an unparseable line."""

    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")
