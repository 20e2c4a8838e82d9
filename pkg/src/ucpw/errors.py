"""Exception hierarchy.

The CLI maps ``DataError`` subclasses to exit code 2 and ``ComputationError``
subclasses to exit code 3.
"""


class UcpError(Exception):
    """Base class for all package errors."""


class DataError(UcpError, ValueError):
    """Input data is malformed or violates the schema."""


class SchemaError(DataError):
    pass


class EmptyDatasetError(DataError):
    pass


class ComputationError(UcpError, ValueError):
    """A well-formed input cannot be processed numerically."""


class DomainError(ComputationError):
    """Argument outside the mathematical domain of an operation."""


class InsufficientDataError(ComputationError):
    pass


class DegenerateSeriesError(ComputationError):
    """Constant series where variation is required (correlation, regression)."""


class UnsupportedSizeError(ComputationError):
    pass


class FitError(ComputationError):
    pass


class MetricDomainError(ComputationError):
    pass


class FoldError(ComputationError):
    """One or more LOOCV folds failed; ``failures`` lists (project id, reason)."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = tuple(failures)
