"""Exceptions raised by the odd-symplectic calculus layer.

Every error is a subclass of :class:`OddSymplecticError` so callers (and the
command line driver) can distinguish domain errors from programming bugs.
"""

from __future__ import annotations

__all__ = [
    "OddSymplecticError",
    "ChartMismatch",
    "ParityViolation",
    "NonInvertibleBody",
    "NoExactSquareRoot",
    "UnknownGenerator",
    "ExpressionSyntaxError",
    "InvalidTransition",
    "NonTerminatingFlow",
    "NotFiberQuadratic",
    "NotClosed",
    "NotProportional",
]


class OddSymplecticError(Exception):
    """Base class for all domain errors in this package."""


class ChartMismatch(OddSymplecticError):
    """Operands live on different charts (or a chart lacks a generator)."""


class ParityViolation(OddSymplecticError):
    """An operation received an argument of the wrong (or mixed) parity."""


class NonInvertibleBody(OddSymplecticError):
    """Inversion of an element whose body (theta-free part) vanishes."""


class NoExactSquareRoot(OddSymplecticError):
    """The element is not an exact perfect square in the coefficient ring."""


class UnknownGenerator(OddSymplecticError):
    """A name does not denote a generator of the chart in scope."""


class ExpressionSyntaxError(OddSymplecticError):
    """The expression text does not conform to the input grammar.

    Carries the 1-based ``line`` and ``column`` of the offending position when
    known; the rendered message always names the position it carries.
    """

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ) -> None:
        if line is not None and column is not None:
            where = f" at column {column}" if line == 1 else f" at line {line}, column {column}"
            message = message + where
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidTransition(OddSymplecticError):
    """Coordinate-change data is malformed (parity, arity, or degeneracy)."""


class NonTerminatingFlow(OddSymplecticError):
    """A Hamiltonian flow series failed to terminate within the step cap."""


class NotFiberQuadratic(OddSymplecticError):
    """A structure Hamiltonian is not homogeneous of fiber degree two."""


class NotClosed(OddSymplecticError):
    """A differential form required to be closed is not."""


class NotProportional(OddSymplecticError):
    """A quotient expected to be a constant multiple is not."""
