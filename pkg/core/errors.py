"""
Error Handling - Exception hierarchy for the VQE lab.

Every failure raised by the engine, the harness or the API derives from
LabError so callers can decide between failing a single trial and
stopping a whole sweep:
- Recoverable errors fail one trial; the sweep continues
- Critical errors (bad configuration) stop before any trial runs
"""

import logging
from enum import Enum
from functools import wraps
from typing import Any, Callable, Optional, TypeVar

from core.logging import LabLogger, get_harness_logger


class ErrorSeverity(Enum):
    """Error severity levels for handling decisions."""
    LOW = "low"           # Log and continue
    MEDIUM = "medium"     # Fail the current trial
    HIGH = "high"         # Fail the current command
    CRITICAL = "critical" # Refuse to start


class LabError(Exception):
    """Base exception for all lab errors."""

    def __init__(
        self,
        message: str,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        recoverable: bool = True,
        context: Optional[dict] = None
    ):
        super().__init__(message)
        self.severity = severity
        self.recoverable = recoverable
        self.context = context or {}

    def to_dict(self) -> dict:
        """JSON body for API error responses."""
        return {
            "error": type(self).__name__,
            "detail": str(self),
            "severity": self.severity.value,
            "context": self.context,
        }


class InvalidArgumentError(LabError):
    """Raised when an argument is outside the supported domain."""

    def __init__(self, message: str, argument: Optional[str] = None):
        super().__init__(
            message,
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"argument": argument}
        )


class ResourceLimitError(LabError):
    """Raised when a dense computation would exceed the desk-scale limit."""

    def __init__(self, message: str, num_qubits: int, limit: int):
        super().__init__(
            message,
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"num_qubits": num_qubits, "limit": limit}
        )


class DimensionMismatchError(LabError):
    """Raised when operand dimensions disagree."""

    def __init__(self, expected: int, actual: int, what: str = "dimension"):
        super().__init__(
            f"{what} mismatch: expected {expected}, got {actual}",
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"expected": expected, "actual": actual}
        )


class SymmetryViolationError(LabError):
    """Raised when a term anticommutes with a declared Z symmetry."""

    def __init__(self, label: str, position: int):
        super().__init__(
            f"Term '{label}' anticommutes with Z on qubit {position}",
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"term": label, "position": position}
        )


class UnsupportedLabelError(LabError):
    """Raised when a Pauli label cannot be handled (Y in grouping)."""

    def __init__(self, label: str, reason: str):
        super().__init__(
            f"Unsupported Pauli label in '{label}': {reason}",
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"term": label}
        )


class ChannelError(LabError):
    """Raised when a noise channel is malformed or cannot be built."""

    def __init__(self, message: str, gate: Optional[str] = None):
        super().__init__(
            message,
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"gate": gate}
        )


class CalibrationError(LabError):
    """Raised when device calibration data violates a physical invariant."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(
            message,
            severity=ErrorSeverity.CRITICAL,
            recoverable=False,
            context={"field": field}
        )


class CalibrationSchemaError(CalibrationError):
    """Raised when a calibration file is missing required entries."""


class DataLoadError(LabError):
    """Raised when data file loading fails."""

    def __init__(self, file_path: str, message: str):
        super().__init__(
            f"Failed to load '{file_path}': {message}",
            severity=ErrorSeverity.HIGH,
            recoverable=False,
            context={"file_path": file_path}
        )


class ConfigurationError(LabError):
    """Raised when configuration is invalid."""

    def __init__(self, message: str):
        super().__init__(
            message,
            severity=ErrorSeverity.CRITICAL,
            recoverable=False
        )


class OptimizationAborted(LabError):
    """Raised when the objective fails mid-optimization; carries the partial trace."""

    def __init__(self, message: str, partial_trace: Any = None):
        super().__init__(
            message,
            severity=ErrorSeverity.MEDIUM,
            recoverable=True,
            context={"evaluations": getattr(partial_trace, "evaluations", None)}
        )
        self.partial_trace = partial_trace


class TrialError(LabError):
    """Raised when a single VQE trial fails."""

    def __init__(self, trial_index: int, message: str):
        super().__init__(
            f"Trial {trial_index} failed: {message}",
            severity=ErrorSeverity.MEDIUM,
            recoverable=True,
            context={"trial_index": trial_index}
        )


T = TypeVar("T")


class GracefulDegradation:
    """
    Turn an exception inside a step into a fallback result.

    Trial graph nodes use it so one broken trial yields a failed record
    instead of stopping the sweep. Only ``exceptions`` are caught; anything
    else propagates.
    """

    def __init__(
        self,
        fallback_value: Any = None,
        fallback_func: Optional[Callable[..., Any]] = None,
        exceptions: tuple[type[BaseException], ...] = (Exception,),
    ):
        self.fallback_value = fallback_value
        self.fallback_func = fallback_func
        self.exceptions = exceptions

    def __call__(self, func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args, **kwargs) -> T:
            try:
                return func(*args, **kwargs)
            except self.exceptions as e:
                context = e.context if isinstance(e, LabError) else {}
                LabLogger.log_with_context(
                    get_harness_logger(func.__name__), logging.WARNING,
                    f"{func.__name__} degraded: {e}",
                    {"error_type": type(e).__name__, **context},
                )
                if self.fallback_func:
                    return self.fallback_func(e, *args, **kwargs)
                return self.fallback_value

        return wrapper
