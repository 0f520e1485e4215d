"""Exception hierarchy. The CLI maps each family onto an exit code."""
from __future__ import annotations


class ChoFisherError(Exception):
    """Base class for all package errors."""


class LabelParseError(ChoFisherError, ValueError):
    pass


class DomainError(ChoFisherError, ValueError):
    """Argument outside the mathematical domain of a kernel."""


class SolverError(ChoFisherError):
    """A numerical procedure failed to deliver a result."""


class AccuracyError(SolverError):
    """Cancellation destroyed more digits than the configured budget."""


class BracketError(SolverError):
    """A root scan ran out of window before finding enough sign changes."""


class ConvergenceError(SolverError):
    pass


class NormalizationError(SolverError):
    pass


class TailTruncationError(SolverError):
    """Momentum grid too short: unaccounted probability lies beyond p_max."""


class InvariantViolation(ChoFisherError):
    """A result breaks a theorem-level identity; signals a numerical fault."""


class BoundViolationError(InvariantViolation):
    pass


class RouteDisagreementError(InvariantViolation):
    pass


class ConsistencyError(InvariantViolation):
    pass
