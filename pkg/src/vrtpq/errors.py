"""Exception hierarchy.

Domain failures (bad inputs, infeasible operating points) subclass
``ValueError`` so callers that only care about "bad number in" can catch
that; everything also derives from :class:`VrtError`.
"""

from __future__ import annotations


class VrtError(Exception):
    """Base class for all package errors."""


class DomainError(VrtError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InfeasiblePower(DomainError):
    """No stable power angle delivers the requested active power."""


class InfeasibleLoad(DomainError):
    """Load active power exceeds the apparent-power limit."""


class VoltageCollapse(DomainError):
    """No load-bus voltage solves the uncompensated power balance."""


class EmptyCurve(DomainError):
    """Every sample of a requested curve is infeasible."""


class DispatchConsistencyError(VrtError, RuntimeError):
    """A dispatch result contradicts its own case classification."""


class TraceError(VrtError, ValueError):
    """Malformed voltage-dip trace."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ConfigError(VrtError, ValueError):
    """Invalid run configuration."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
