"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class PoincareError(Exception):
    """Base class for every error raised by poincare_cube."""


class InvalidInputError(PoincareError, ValueError):
    """An argument is malformed or outside its documented range."""


class InvalidDomainError(InvalidInputError):
    """An operator was applied outside the algebra it is defined on."""


class UnsupportedSpaceError(InvalidInputError):
    """A function space has no classified Khintchine constant (or no dual)."""


class BudgetExceededError(PoincareError, RuntimeError):
    """A Pauli term budget or dense dimension cap was exceeded."""


class NumericError(PoincareError, ArithmeticError):
    """A numerical routine failed to reach its tolerance.

    ``value`` and ``error_estimate`` carry the best partial result so callers can
    decide whether it is still usable.
    """

    def __init__(
        self,
        message: str,
        *,
        value: object | None = None,
        error_estimate: float | None = None,
    ) -> None:
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


__all__ = [
    "BudgetExceededError",
    "InvalidDomainError",
    "InvalidInputError",
    "NumericError",
    "PoincareError",
    "UnsupportedSpaceError",
]
