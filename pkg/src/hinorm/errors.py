"""Exception hierarchy shared by every module."""

from dataclasses import dataclass


class HinormError(Exception):
    pass


class DomainError(HinormError, ValueError):
    """Input outside the mathematical domain of an operation."""


class MalformedBlockSequence(DomainError):
    pass


class ResourceLimitError(HinormError):
    """A configured size limit would be exceeded.

    ``required`` carries the magnitude that was needed, when known.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class IntegrityError(HinormError):
    """Persisted or certified data failed a replay check."""


@dataclass(frozen=True)
class Violation:
    """One failed condition reported by a validator."""

    code: str
    message: str
    detail: tuple = ()

    def __str__(self):
        return f"{self.code}: {self.message}"
