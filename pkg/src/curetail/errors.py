"""Exception hierarchy.

Two branches: ValidationError for malformed inputs (bad shapes, domains,
file formats) and NumericalError for data that admits no usable fit or
trips a compute-time guard.  The CLI maps them to exit codes 2 and 3.
"""


class CuretailError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CuretailError):
    """Input violates a documented precondition."""


class NumericalError(CuretailError):
    """Computation cannot proceed on this data."""


class EmptySampleError(ValidationError):
    """Sample contains no observations."""


class InvalidKError(ValidationError):
    """Tail size k outside the range the sample supports."""


class DatasetFormatError(ValidationError):
    """CSV input does not follow the time,status layout."""


class KTooSmallForStressError(ValidationError):
    """Stress sweep requested fractions the tail size cannot cover."""


class TransformDomainError(NumericalError):
    """Transform argument outside its open domain."""


class NonPositiveThresholdError(NumericalError):
    """Log-scale construction needs a strictly positive threshold."""


class InfeasiblePError(NumericalError):
    """Cure level p outside the admissible interval."""


class InfeasiblePiError(NumericalError):
    """Conditional level pi outside the admissible interval."""


class DegenerateRegressorError(NumericalError):
    """All regressor values vanish; no slope is identifiable."""


class DegenerateExceedancesError(NumericalError):
    """Exceedance sample carries no usable information."""
