"""Exception types for adversim."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .trace import ExecutionTrace


class AdversimError(Exception):
    """Base class for all adversim errors."""


class DimensionMismatchError(AdversimError, ValueError):
    """A graph or input does not match the processor count of a spec."""


class BudgetExceededError(AdversimError, RuntimeError):
    """An enumeration or search would exceed its configured cap."""

    def __init__(self, what: str, count: int, cap: int) -> None:
        super().__init__(f"{what}: {count} exceeds the configured cap of {cap}.")
        self.what = what
        self.count = int(count)
        self.cap = int(cap)


class ProtocolViolation(AdversimError):
    """A protocol postcondition failed; the offending trace is attached."""

    def __init__(self, message: str, trace: ExecutionTrace | None = None, detail: Any = None) -> None:
        super().__init__(message)
        self.trace = trace
        self.detail = detail


class MalformedComplexError(AdversimError, ValueError):
    """A complex is not chromatic where a split requires it to be."""


class UnsupportedDimensionError(AdversimError, ValueError):
    """An export format does not support the requested processor count."""


class UsageError(AdversimError, ValueError):
    """Invalid command-line configuration."""
