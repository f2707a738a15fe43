"""Exception hierarchy shared by every stage of the pipeline."""


class SensorQuboError(Exception):
    """Base class for all package errors."""


class ValidationError(SensorQuboError, ValueError):
    """Input rejected by a validation or parsing step (CLI exit code 1)."""


class InvalidCovariance(ValidationError):
    pass


class EmptyMatrix(InvalidCovariance):
    pass


class AsymmetricMatrix(InvalidCovariance):
    pass


class NotPositiveDefinite(InvalidCovariance):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class InvalidCardinality(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class InsufficientSamples(ValidationError):
    pass


class ProblemTooLarge(SensorQuboError):
    """Requested enumeration exceeds a hard size cap (CLI exit code 2)."""


class InconsistentAuxiliary(UserWarning):
    """An auxiliary bit disagrees with the product of its defining pair."""
