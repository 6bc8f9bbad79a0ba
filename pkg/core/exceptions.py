"""
Simulator exception hierarchy.
"""
from typing import Any, Dict, Optional


class IrsSimError(Exception):
    """Base exception for simulator errors."""

    code: str = "error"

    def __init__(self, message: str, cause: Optional[BaseException] = None) -> None:
        super().__init__(message)
        self.message = message
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI and the HTTP API."""
        return {"error": self.code, "message": self.message}


class InvalidArgumentError(IrsSimError, ValueError):
    """Argument outside the operation's domain."""

    code = "invalid_argument"


class ConfigError(InvalidArgumentError):
    """System or experiment configuration violates an invariant."""

    code = "invalid_config"


class TrainingDivergedError(IrsSimError):
    """Estimator loss became non-finite."""

    code = "training_diverged"

    def __init__(self, epoch: int, loss: float) -> None:
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"Training diverged at epoch {epoch}: loss={loss}")


class InsufficientDataError(IrsSimError):
    """A conditional-mean cell has no samples."""

    code = "insufficient_data"

    def __init__(self, element: int, phase: float) -> None:
        self.element = element
        self.phase = phase
        super().__init__(f"No measurement with theta_{element} = {phase:.6f} rad")


class ProblemTooLargeError(IrsSimError):
    """Exhaustive enumeration would exceed the size guard."""

    code = "too_large"


class ReportIOError(IrsSimError, OSError):
    """Writing or reading an artifact failed."""

    code = "io_error"
