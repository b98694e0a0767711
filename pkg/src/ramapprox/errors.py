"""Exception hierarchy shared by every module.

Domain errors carry a JSON-serialisable ``certificate`` so that the command
line can report why an input was rejected.
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for mathematically meaningful failures."""

    def __init__(self, message: str = "", certificate: dict[str, Any] | None = None):
        super().__init__(message)
        self.certificate = dict(certificate or {})

    def to_json(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), "certificate": self.certificate}


class NegativeValuation(DomainError):
    pass


class DivisionByZeroPoly(DomainError, ZeroDivisionError):
    pass


class DegreeTooLargeOverQ(DomainError):
    pass


class InfiniteValue(DomainError):
    pass


class InvalidKey(DomainError):
    pass


class KeyValueTooSmall(DomainError):
    pass


class NotIrreducible(DomainError):
    pass


class NotAUnit(DomainError):
    pass


class PrimitiveSearchExhausted(DomainError):
    pass


class Uncertified(DomainError):
    pass


class ChainBudgetExceeded(DomainError):
    pass


class PurelyInseparableLocal(DomainError):
    pass


class ResidueCharZero(DomainError):
    pass


class NoCertifiedCandidate(DomainError):
    pass


class NotEquispaced(DomainError):
    pass


class SingularModel(DomainError):
    pass


class NonIntegralModel(DomainError):
    pass


class ResidueCharThree(DomainError):
    pass


class PatternViolation(DomainError):
    pass


class NotPotentialMultiplicative(DomainError):
    pass


class NotCoprime(DomainError):
    pass


class DegreeMismatch(DomainError):
    pass


class SearchBudgetExceeded(DomainError):
    pass


class ParseError(ValueError):
    """Malformed textual input (a usage error, not a domain error)."""
