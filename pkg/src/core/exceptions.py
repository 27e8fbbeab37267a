"""Exception hierarchy for the toolkit.

Every error carries a stable machine code so the command line can report a
one-line, parseable reason.
"""

from typing import Any, Dict, Optional

from src.schemas.base import ErrorPayload


class ToolkitError(Exception):
    """Base exception for toolkit errors."""

    code = "TOOLKIT_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def payload(self) -> ErrorPayload:
        return ErrorPayload(error=self.code, message=self.message, details=self.details or None)

    def to_dict(self) -> Dict[str, Any]:
        """The one-line error object printed on stderr."""
        return self.payload().model_dump(exclude_none=True)


# Data / ingestion


class EmptyInput(ToolkitError):
    """Raised when a sample has no observations."""

    code = "EMPTY_INPUT"

    def __init__(self, message: str = "Sample must contain at least one value"):
        super().__init__(message)


class NonFiniteValue(ToolkitError):
    """Raised when a sample contains NaN or an infinity."""

    code = "NON_FINITE_VALUE"

    def __init__(self, index: int, value: float):
        super().__init__(
            f"Value at index {index} is not finite: {value!r}",
            {"index": index, "value": repr(value)},
        )
        self.index = index


class ParseError(ToolkitError):
    """Raised when input text cannot be parsed."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: Optional[int] = None):
        details = {"line": line} if line is not None else {}
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}", details)
        self.line = line


# Numerical domain


class DomainError(ToolkitError):
    """Raised when an argument lies outside the function domain."""

    code = "DOMAIN_ERROR"


class OutsideValidityDomain(DomainError):
    """Raised when an approximation formula is requested outside its fitted grid."""

    code = "OUTSIDE_VALIDITY_DOMAIN"

    def __init__(self, n: int, method: str):
        super().__init__(
            f"{method} coefficient is only defined for n = 4m+1 with m in 2..124; got n={n}",
            {"n": n, "method": method},
        )
        self.n = n


class InvalidParameters(ToolkitError):
    """Raised when distribution or method parameters are invalid."""

    code = "INVALID_PARAMETERS"


class ConvergenceFailure(ToolkitError):
    """Raised when quantile inversion fails to converge."""

    code = "CONVERGENCE_FAILURE"


# Fitting


class NonPositiveData(ToolkitError):
    """Raised when a positive-support fit sees a non-positive observation."""

    code = "NON_POSITIVE_DATA"


class DegenerateVariance(ToolkitError):
    """Raised when a computation needs a positive spread and the sample has none."""

    code = "DEGENERATE_VARIANCE"


class NonPositiveMean(ToolkitError):
    """Raised when the chi-square moment fit sees a non-positive mean."""

    code = "NON_POSITIVE_MEAN"


class VarianceAtMostOne(ToolkitError):
    """Raised when the Student-t moment equation has no solution."""

    code = "VARIANCE_AT_MOST_ONE"


# Fences and detection


class DegenerateIQR(ToolkitError):
    """Raised when quartile-based fences cannot be formed."""

    code = "DEGENERATE_IQR"


class InvertedFences(ToolkitError):
    """Raised when a lower fence is not below its upper fence."""

    code = "INVERTED_FENCES"


class InconsistentOuter(ToolkitError):
    """Raised when outer fences do not enclose the inner fences."""

    code = "INCONSISTENT_OUTER"


# Simulation and rendering


class InvalidConfig(ToolkitError):
    """Raised when a run or simulation configuration is invalid."""

    code = "INVALID_CONFIG"


class EmptySpec(ToolkitError):
    """Raised when a plot has no panels."""

    code = "EMPTY_SPEC"

    def __init__(self, message: str = "Plot specification has no panels"):
        super().__init__(message)


class InconsistentPanel(ToolkitError):
    """Raised when a panel report does not describe its sample."""

    code = "INCONSISTENT_PANEL"


# Command line


class UsageError(ToolkitError):
    """Raised when command-line arguments cannot be parsed."""

    code = "USAGE_ERROR"


class InternalError(ToolkitError):
    """Wraps an unexpected exception for reporting; exits with status 1."""

    code = "INTERNAL_ERROR"

    def __init__(self, cause: BaseException):
        super().__init__(str(cause) or type(cause).__name__)
