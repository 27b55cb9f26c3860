"""Exception hierarchy for confcount."""

from __future__ import annotations

from collections.abc import Sequence


class ConfCountError(Exception):
    """Base class for all confcount errors."""


class InvalidInstanceError(ConfCountError, ValueError):
    """Raised when an instance cannot be parsed or fails validation."""

    def __init__(self, message: str, violations: Sequence[str] = ()) -> None:
        """Initialize with a summary message and the individual violations."""
        super().__init__(message)
        self.violations: tuple[str, ...] = tuple(violations)


class GraphError(ConfCountError, ValueError):
    """Raised for unbalanced graphs or invalid pruning sets."""


class ChowError(ConfCountError, ValueError):
    """Raised when a class formula is requested for an empty neighborhood."""


class FieldError(ConfCountError, ValueError):
    """Raised for invalid prime-field input (bad prime, non-square matrix)."""


class SamplingError(ConfCountError):
    """Raised when rejection sampling exhausts its retry cap."""


class ResourceLimitExceeded(ConfCountError):
    """Raised when a Groebner basis computation hits a configured cap."""


class PreconditionError(ConfCountError):
    """Raised when a workflow is invoked on an instance it does not apply to."""
