"""
Exception hierarchy shared by every q-lab package.
Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Iterable, Optional


class QLabError(Exception):
    """Base class for all q-lab failures."""


class DomainError(QLabError, ValueError):
    """An argument lies outside the operation's domain."""


class UnsupportedExactInputError(DomainError):
    """A value cannot be represented exactly (e.g. non-integer exponent in exact mode)."""


class ConvergenceError(QLabError):
    """A series, product or lattice sum did not meet its stopping rule."""

    def __init__(self, message: str, terms: Optional[int] = None, tail: Optional[str] = None):
        super().__init__(message)
        self.terms = terms
        self.tail = tail


class DivergenceError(QLabError):
    """A lattice tail grows instead of decaying."""

    def __init__(self, message: str, axis: str = "x", tail: str = "large-x"):
        super().__init__(f"{message} [axis={axis}, tail={tail}]")
        self.axis = axis
        self.tail = tail

    def on_axis(self, axis: str) -> "DivergenceError":
        """Return a copy attributed to another axis of a 2-D sum."""
        message = str(self).rsplit(" [axis=", 1)[0]
        return DivergenceError(message, axis=axis, tail=self.tail)


class PoleError(QLabError, ZeroDivisionError):
    """A Pochhammer factor in a denominator vanishes."""


class LimitError(QLabError):
    """A lattice limit at 0 did not settle."""


class CatalogMissError(QLabError):
    """No closed form is catalogued for this (function, transform kind) pair."""


class IncompleteDataError(QLabError):
    """A derivative image needs a boundary trace that was not supplied."""


class UnsupportedMultiplicityError(QLabError):
    """Partial fractions received a repeated denominator factor."""


class NoMatchError(QLabError):
    """Inverse lookup found no catalog entry for part of an expression."""

    def __init__(self, message: str, residual: Iterable[str] = ()):
        self.residual = tuple(residual)
        if self.residual:
            message = f"{message}; unmatched: " + ", ".join(self.residual)
        super().__init__(message)


class ResidualError(QLabError):
    """A candidate solution fails its residual check."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={float(residual):.3e})")
        self.residual = residual
