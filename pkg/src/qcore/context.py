"""
QContext: the deformation parameter q together with the scalar mode and tolerances.
Every q-lab operation receives one explicitly; there is no global q.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Union

import config
from qcore.errors import DomainError, UnsupportedExactInputError

Scalar = Union[Fraction, float, int]


class ScalarMode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


def is_integral(value) -> bool:
    """True for ints, integral Fractions and integral floats (bool excluded)."""
    if isinstance(value, bool):
        return False
    if isinstance(value, numbers.Integral):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, float):
        return value.is_integer()
    if isinstance(value, numbers.Rational):
        return value.denominator == 1
    return False


def parse_scalar(text: str) -> Fraction:
    """Parse '1/2', '0.25' or '-3' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse scalar {text!r}") from exc


@dataclass(frozen=True)
class QContext:
    """
    Deformation parameter and numeric policy.

    Business Logic:
    - q must lie strictly inside (0, 1); q = 1 (classical limit) and q <= 0 are rejected
    - exact mode stores q as a Fraction and qcore results stay exact
    - float mode stores q as a float; default_tol and max_terms drive every
      truncated series, product and lattice sum

    Raises:
        DomainError: q outside (0, 1), non-positive tolerance or term cap
        UnsupportedExactInputError: a binary float q in exact mode
    """

    q: Scalar
    mode: ScalarMode = ScalarMode.EXACT
    default_tol: float = config.DEFAULT_TOL
    max_terms: int = config.MAX_TERMS

    def __post_init__(self):
        mode = ScalarMode(self.mode)
        q = self.q
        if isinstance(q, str):
            q = parse_scalar(q)

        if mode is ScalarMode.EXACT:
            if isinstance(q, float):
                raise UnsupportedExactInputError(
                    f"exact mode needs a rational q, got float {q!r}; pass a Fraction or '1/2'"
                )
            q = Fraction(q)
        else:
            q = float(q)

        if not 0 < q < 1:
            raise DomainError(f"q must satisfy 0 < q < 1, got {q}")
        if not self.default_tol > 0:
            raise DomainError(f"default_tol must be positive, got {self.default_tol}")
        if self.max_terms <= 0:
            raise DomainError(f"max_terms must be positive, got {self.max_terms}")

        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_text(cls, q_text: str, mode: str = "exact", **kwargs) -> QContext:
        return cls(parse_scalar(q_text), ScalarMode(mode), **kwargs)

    @property
    def is_exact(self) -> bool:
        return self.mode is ScalarMode.EXACT

    @property
    def q_float(self) -> float:
        return float(self.q)

    @property
    def q_rational(self) -> Fraction:
        """q as a Fraction in either mode (float q read through its shortest repr)."""
        if isinstance(self.q, Fraction):
            return self.q
        return Fraction(repr(self.q))

    def floating(self) -> QContext:
        if not self.is_exact:
            return self
        return replace(self, q=float(self.q), mode=ScalarMode.FLOAT)

    def exact(self) -> QContext:
        if self.is_exact:
            return self
        return replace(self, q=self.q_rational, mode=ScalarMode.EXACT)

    def coerce(self, value) -> Scalar:
        """Bring a user scalar into this context's arithmetic."""
        if self.is_exact:
            if isinstance(value, str):
                return parse_scalar(value)
            if isinstance(value, float):
                if not value.is_integer():
                    raise UnsupportedExactInputError(f"float {value!r} is not exact")
                return Fraction(int(value))
            return Fraction(value)
        if isinstance(value, str):
            return float(parse_scalar(value))
        return float(value)

    def power(self, exponent) -> Scalar:
        """q**exponent; exact for integer exponents in exact mode."""
        if is_integral(exponent):
            return self.q ** int(exponent)
        if self.is_exact:
            raise UnsupportedExactInputError(f"q**{exponent} is not rational in exact mode")
        return self.q_float ** float(exponent)
