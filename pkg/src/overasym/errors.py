"""Exception hierarchy shared by every module."""

from __future__ import annotations


class OverasymError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OverasymError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(OverasymError, ValueError):
    """A numeric configuration (e.g. precision) is rejected."""


class RangeError(OverasymError, IndexError):
    """An index falls outside the range covered by a table."""


class PreconditionError(OverasymError, ValueError):
    """A statement was asked about ``n`` below its validity threshold."""

    def __init__(self, message: str, n_min: int):
        super().__init__(message)
        self.n_min = n_min


class CertificationError(OverasymError, ArithmeticError):
    """No truncation order certified the rounded value."""

    def __init__(self, message: str, best_bound):
        super().__init__(message)
        self.best_bound = best_bound
