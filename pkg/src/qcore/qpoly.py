"""
Bivariate polynomials in (x, y) with exact or float coefficients, and the
q-addition laws expanded as such polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from qcore.combinatorics import binom2, q_binomial, q_factorial
from qcore.context import QContext, Scalar
from qcore.errors import DomainError

Exponent = Tuple[int, int]


class AdditionKind(str, Enum):
    WARD_ADD = "ward_add"
    WARD_SUB = "ward_sub"
    COADD = "coadd"
    COSUB = "cosub"
    QPOW_ADD = "qpow_add"
    QPOW_SUB = "qpow_sub"

    @property
    def is_subtraction(self) -> bool:
        return self in (AdditionKind.WARD_SUB, AdditionKind.COSUB, AdditionKind.QPOW_SUB)

    @property
    def addition(self) -> AdditionKind:
        """The addition law this law is the signed variant of."""
        return {
            AdditionKind.WARD_SUB: AdditionKind.WARD_ADD,
            AdditionKind.COSUB: AdditionKind.COADD,
            AdditionKind.QPOW_SUB: AdditionKind.QPOW_ADD,
        }.get(self, self)

    @property
    def symbol(self) -> str:
        return {
            AdditionKind.WARD_ADD: "⊕_q",
            AdditionKind.WARD_SUB: "⊖_q",
            AdditionKind.COADD: "⊞_q",
            AdditionKind.COSUB: "⊟_q",
            AdditionKind.QPOW_ADD: "⊕",
            AdditionKind.QPOW_SUB: "⊖",
        }[self]


@dataclass(frozen=True)
class QPoly2:
    """
    Sparse polynomial sum c_ij x^i y^j.

    Terms are kept sorted by exponent pair and zero coefficients are never stored,
    so two equal polynomials compare equal field by field.
    """

    terms: Tuple[Tuple[Exponent, Scalar], ...] = ()

    def __post_init__(self):
        merged: Dict[Exponent, Scalar] = {}
        for (i, j), c in self.terms:
            if i < 0 or j < 0:
                raise DomainError(f"negative exponent ({i}, {j}) in QPoly2")
            merged[(i, j)] = merged.get((i, j), 0) + c
        cleaned = tuple(sorted((key, c) for key, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, coefficients: Mapping[Exponent, Scalar]) -> QPoly2:
        return cls(tuple(coefficients.items()))

    @classmethod
    def constant(cls, c: Scalar) -> QPoly2:
        return cls((((0, 0), c),))

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> QPoly2:
        return cls((((i, j), c),))

    @classmethod
    def univariate(cls, coeffs: Sequence[Scalar], var: str = "x") -> QPoly2:
        if var not in ("x", "y"):
            raise DomainError(f"var must be 'x' or 'y', got {var!r}")
        if var == "x":
            return cls(tuple(((n, 0), c) for n, c in enumerate(coeffs)))
        return cls(tuple(((0, n), c) for n, c in enumerate(coeffs)))

    # -- inspection ---------------------------------------------------------

    @property
    def coefficients(self) -> Dict[Exponent, Scalar]:
        return dict(self.terms)

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.coefficients.get((i, j), 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((i + j for (i, j), _ in self.terms), default=-1)

    def max_abs_coefficient(self) -> Scalar:
        return max((abs(c) for _, c in self.terms), default=0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: QPoly2) -> QPoly2:
        if not isinstance(other, QPoly2):
            other = QPoly2.constant(other)
        return QPoly2(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> QPoly2:
        return QPoly2(tuple((key, -c) for key, c in self.terms))

    def __sub__(self, other: QPoly2) -> QPoly2:
        if not isinstance(other, QPoly2):
            other = QPoly2.constant(other)
        return self + (-other)

    def __mul__(self, other) -> QPoly2:
        if not isinstance(other, QPoly2):
            return QPoly2(tuple((key, c * other) for key, c in self.terms))
        products = []
        for (i1, j1), c1 in self.terms:
            for (i2, j2), c2 in other.terms:
                products.append(((i1 + i2, j1 + j2), c1 * c2))
        return QPoly2(tuple(products))

    __rmul__ = __mul__

    # -- transformations ----------------------------------------------------

    def truncate(self, max_degree: int) -> QPoly2:
        return QPoly2(tuple((key, c) for key, c in self.terms if sum(key) <= max_degree))

    def substitute_scaled(self, alpha: Scalar, beta: Scalar) -> QPoly2:
        """p(alpha x, beta y)."""
        return QPoly2(tuple(((i, j), c * alpha ** i * beta ** j) for (i, j), c in self.terms))

    def q_derivative(self, x_order: int, y_order: int, ctx: QContext) -> QPoly2:
        """D_x^i D_y^j term by term: D_q^k t^n = ([n]_q! / [n-k]_q!) t^(n-k), zero when k > n."""
        if x_order < 0 or y_order < 0:
            raise DomainError(f"derivative orders must be non-negative, got ({x_order}, {y_order})")
        terms = []
        for (i, j), c in self.terms:
            if i < x_order or j < y_order:
                continue
            falling = (q_factorial(i, ctx) / q_factorial(i - x_order, ctx)) * (
                q_factorial(j, ctx) / q_factorial(j - y_order, ctx)
            )
            terms.append(((i - x_order, j - y_order), c * falling))
        return QPoly2(tuple(terms))

    def evaluate(self, x, y):
        """Evaluate at scalars or numpy arrays of matching shape."""
        total = 0 * x * y
        for (i, j), c in self.terms:
            total = total + c * x ** i * y ** j
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms:
            powers = "".join(
                p for p in (_power("x", i), _power("y", j)) if p
            )
            parts.append(f"{c}{'·' + powers if powers else ''}")
        return " + ".join(parts)


def _power(name: str, n: int) -> str:
    if n == 0:
        return ""
    return name if n == 1 else f"{name}^{n}"


def expand_q_addition(kind: AdditionKind, n: int, ctx: QContext) -> QPoly2:
    """
    Expand an n-th power under one of the q-addition laws.

    Business Logic:
    - ward_add (x ⊕_q y)^n: coefficient of x^k y^(n-k) is [n choose k]_q
    - coadd (x ⊞_q y)^n: the Ward coefficient times q^(k(k-n))
    - qpow_add (x ⊕ y)_q^n: the Ward coefficient times q^binom(n-k, 2),
      i.e. the product (x + y)(x + qy)...(x + q^(n-1) y)
    - subtraction laws carry (-1)^(n-k), i.e. y replaced by -y

    Args:
        kind: the addition law
        n: non-negative power
        ctx: q and scalar mode

    Returns:
        Homogeneous QPoly2 of degree n
    """
    kind = AdditionKind(kind)
    if n < 0:
        raise DomainError(f"q-addition power must be >= 0, got {n}")
    base = kind.addition
    terms = []
    for k in range(n + 1):
        c = q_binomial(n, k, ctx)
        if base is AdditionKind.COADD:
            c *= ctx.power(k * (k - n))
        elif base is AdditionKind.QPOW_ADD:
            c *= ctx.power(binom2(n - k))
        if kind.is_subtraction and (n - k) % 2:
            c = -c
        terms.append(((k, n - k), c))
    return QPoly2(tuple(terms))


def factor_product(n: int, ctx: QContext, subtract: bool = False) -> QPoly2:
    """The literal product of (x ± y q^i) for i < n."""
    result = QPoly2.constant(ctx.coerce(1))
    sign = -1 if subtract else 1
    for i in range(n):
        result = result * QPoly2((((1, 0), ctx.coerce(1)), ((0, 1), sign * ctx.power(i))))
    return result


def series_weight(n: int, kind: AdditionKind, ctx: QContext) -> Scalar:
    """w_n = 1/[n]_q! for ward_add, q^binom(n, 2)/[n]_q! for coadd."""
    kind = AdditionKind(kind)
    if kind is AdditionKind.WARD_ADD:
        return 1 / q_factorial(n, ctx)
    if kind is AdditionKind.COADD:
        return ctx.power(binom2(n)) / q_factorial(n, ctx)
    raise DomainError(f"series composition is defined for ward_add and coadd, got {kind.value}")


def series_q_compose(
    coeffs: Iterable[Scalar],
    kind: AdditionKind,
    alpha: Scalar,
    beta: Scalar,
    ctx: QContext,
) -> QPoly2:
    """
    Apply f(t) = sum a_n w_n t^n to the q-sum (alpha x) ∘ (beta y), coefficient-wise.

    Returns sum over n of a_n * w_n * expand_q_addition(kind, n)(alpha x, beta y).
    """
    kind = AdditionKind(kind)
    alpha, beta = ctx.coerce(alpha), ctx.coerce(beta)
    total = QPoly2()
    for n, a_n in enumerate(coeffs):
        if a_n == 0:
            continue
        weight = series_weight(n, kind, ctx)
        total = total + expand_q_addition(kind, n, ctx).substitute_scaled(alpha, beta) * (a_n * weight)
    return total
