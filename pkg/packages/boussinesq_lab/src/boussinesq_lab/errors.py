"""Custom exception hierarchy for boussinesq-lab."""

from typing import Any, Dict, Optional


class ErrorCodes:
    """Stable error codes carried by every LabError."""

    CONFIG = "config"
    INVALID_INPUT = "invalid_input"
    NUMERICAL = "numerical"
    CFL = "cfl"
    SCHEMA = "schema"
    ACCEPTANCE = "acceptance"
    IO = "io"


class LabError(RuntimeError):
    """Base error for boussinesq-lab."""

    def __init__(
        self,
        message: str,
        code: str = ErrorCodes.INVALID_INPUT,
        meta: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.code = code
        self.meta = meta or {}


class ConfigError(LabError):
    """Raised when a configuration file is missing, unparsable or has unknown keys."""

    def __init__(self, message: str, meta: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, code=ErrorCodes.CONFIG, meta=meta)


class InvalidInputError(LabError, ValueError):
    """Raised when an operation's precondition is violated by its arguments."""

    def __init__(self, message: str, meta: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, code=ErrorCodes.INVALID_INPUT, meta=meta)


class GridError(InvalidInputError):
    """Invalid grid sizes or fields living on different grids."""


class ZeroFrequencyError(InvalidInputError):
    """Raised when an operation undefined at xi = 0 receives the origin."""


class SingularWeightError(InvalidInputError):
    """Nonzero amplitude on a mode where an anisotropic weight is singular."""


class QuadratureError(InvalidInputError):
    """Time mesh too coarse for composite Simpson quadrature."""


class SnapshotSpacingError(InvalidInputError):
    """Snapshots are too few or not uniformly spaced in time."""


class HypothesisError(InvalidInputError):
    """Exponents outside the range where the decay estimates apply."""


class AdmissibilityError(InvalidInputError):
    """Lyapunov weight outside the admissible range for the cutoff."""


class NumericalError(LabError):
    """Base class for failures of a numerical run."""

    def __init__(
        self,
        message: str,
        code: str = ErrorCodes.NUMERICAL,
        meta: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message, code=code, meta=meta)


class NumericalInstabilityError(NumericalError):
    """NaN or Inf detected in a field."""


class CFLViolationError(NumericalError):
    """Advective CFL number above the allowed limit."""

    def __init__(self, message: str, cfl: float, suggested_dt: float) -> None:
        super().__init__(
            message,
            code=ErrorCodes.CFL,
            meta={"cfl": cfl, "suggested_dt": suggested_dt},
        )
        self.cfl = cfl
        self.suggested_dt = suggested_dt


class ReportSchemaError(LabError):
    """A report row does not match its declared schema."""

    def __init__(self, message: str, column: str) -> None:
        super().__init__(message, code=ErrorCodes.SCHEMA, meta={"column": column})
        self.column = column


class ReportIOError(LabError):
    """Reading or writing a report or snapshot file failed."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(message, code=ErrorCodes.IO, meta={"path": path})
        self.path = path


class AcceptanceError(LabError):
    """One or more acceptance checks failed."""

    def __init__(self, message: str, failed: list[str]) -> None:
        super().__init__(message, code=ErrorCodes.ACCEPTANCE, meta={"failed": failed})
        self.failed = failed


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code contract."""
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, AcceptanceError):
        return EXIT_ACCEPTANCE
    return EXIT_FAILURE


__all__ = [
    "ErrorCodes",
    "LabError",
    "ConfigError",
    "InvalidInputError",
    "GridError",
    "ZeroFrequencyError",
    "SingularWeightError",
    "QuadratureError",
    "SnapshotSpacingError",
    "HypothesisError",
    "AdmissibilityError",
    "NumericalError",
    "NumericalInstabilityError",
    "CFLViolationError",
    "ReportSchemaError",
    "ReportIOError",
    "AcceptanceError",
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_ACCEPTANCE",
    "exit_code_for",
]
