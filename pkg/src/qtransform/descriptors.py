"""
Symbolic integrand descriptors: one-variable atoms and the two-variable families
the double transforms have closed forms for. Every descriptor also evaluates
pointwise (numpy-vectorised) so the numeric and catalog paths see the same function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
import sympy

from qcalc.derivative import LatticeFunction1D, LatticeFunction2D
from qcore.context import QContext, is_integral
from qcore.errors import DomainError
from qcore.qpoly import AdditionKind, QPoly2, expand_q_addition, series_q_compose
from qspecial.exponential import (
    Family,
    TrigSelector,
    exp_series_coefficients,
    q_exp_big,
    q_exp_small,
    q_trig,
    trig_series_coefficients,
)


def is_symbolic(value) -> bool:
    return isinstance(value, sympy.Basic) and bool(value.free_symbols)


def as_float(value) -> float:
    if is_symbolic(value):
        raise DomainError(f"parameter {value} is symbolic; instantiate it before evaluating")
    return float(value)


def substitute(value, values: Dict[Any, Any]):
    if isinstance(value, sympy.Basic):
        result = value.subs(values)
        return result if result.free_symbols else _plain(result)
    return value


def _plain(value: sympy.Basic):
    if value.is_Integer:
        return int(value)
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return float(value)


def fmt(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _scaled(coefficient, var: str) -> str:
    if coefficient == 1:
        return var
    if coefficient == -1:
        return f"-{var}"
    return f"{fmt(coefficient)}{var}"


# ---------------------------------------------------------------------------
# one-variable atoms
# ---------------------------------------------------------------------------


class AtomTag(str, Enum):
    CONSTANT = "constant"
    MONOMIAL = "monomial"
    EXP_SMALL = "exp_small"
    EXP_BIG = "exp_big"
    TRIG = "trig"


@dataclass(frozen=True)
class Atom1D:
    """
    A one-variable building block: c, t^alpha, e_q(a t), E_q(a t) or a q-trig function of a t.

    The parameter is the constant's value, the exponent, or the rate a.
    """

    tag: AtomTag
    parameter: Any = 1
    selector: Optional[TrigSelector] = None

    def __post_init__(self):
        tag = AtomTag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag is AtomTag.TRIG:
            if self.selector is None:
                raise DomainError("trig atom needs a selector")
            object.__setattr__(self, "selector", TrigSelector(self.selector))
        elif self.selector is not None:
            raise DomainError(f"{tag.value} atom takes no selector")
        if tag is AtomTag.MONOMIAL and not is_symbolic(self.parameter) and not self.parameter > -1:
            raise DomainError(f"monomial exponent must exceed -1, got {self.parameter}")

    @classmethod
    def constant(cls, value=1) -> Atom1D:
        return cls(AtomTag.CONSTANT, value)

    @classmethod
    def monomial(cls, alpha) -> Atom1D:
        return cls(AtomTag.MONOMIAL, alpha)

    @classmethod
    def exp_small(cls, a) -> Atom1D:
        return cls(AtomTag.EXP_SMALL, a)

    @classmethod
    def exp_big(cls, a) -> Atom1D:
        return cls(AtomTag.EXP_BIG, a)

    @classmethod
    def trig(cls, selector: TrigSelector, a) -> Atom1D:
        return cls(AtomTag.TRIG, a, TrigSelector(selector))

    @property
    def is_zero(self) -> bool:
        return self.tag is AtomTag.CONSTANT and self.parameter == 0

    def evaluate(self, t, ctx: QContext):
        t = np.asarray(t, dtype=float)
        p = as_float(self.parameter)
        if self.tag is AtomTag.CONSTANT:
            return np.full(t.shape, p) if t.ndim else p
        if self.tag is AtomTag.MONOMIAL:
            return t ** p
        if self.tag is AtomTag.EXP_SMALL:
            return q_exp_small(p * t, ctx)
        if self.tag is AtomTag.EXP_BIG:
            return q_exp_big(p * t, ctx)
        return q_trig(p * t, self.selector, ctx)

    def as_lattice_function(self, ctx: QContext) -> LatticeFunction1D:
        return LatticeFunction1D(lambda t: self.evaluate(t, ctx), descriptor=self)

    def instantiate(self, values: Dict[Any, Any]) -> Atom1D:
        return Atom1D(self.tag, substitute(self.parameter, values), self.selector)

    def series_coefficients(self, degree: int, ctx: QContext) -> List:
        return power_series_coefficients(self, degree, ctx)

    def render(self, var: str = "x") -> str:
        p = self.parameter
        if self.tag is AtomTag.CONSTANT:
            return fmt(p)
        if self.tag is AtomTag.MONOMIAL:
            if p == 0:
                return "1"
            return var if p == 1 else f"{var}^{fmt(p)}"
        if self.tag is AtomTag.EXP_SMALL:
            return f"e_q({_scaled(p, var)})"
        if self.tag is AtomTag.EXP_BIG:
            return f"E_q({_scaled(p, var)})"
        return f"{self.selector.label}({_scaled(p, var)})"

    def __str__(self) -> str:
        return self.render("x")


# ---------------------------------------------------------------------------
# two-variable descriptors
# ---------------------------------------------------------------------------


class Descriptor:
    """Shared behaviour of the two-variable descriptor variants."""

    def evaluate(self, x, y, ctx: QContext):
        raise NotImplementedError

    def instantiate(self, values: Dict[Any, Any]) -> Descriptor:
        raise NotImplementedError

    def as_lattice_function(self, ctx: QContext) -> LatticeFunction2D:
        fctx = ctx.floating()
        return LatticeFunction2D(lambda x, y: self.evaluate(x, y, fctx), descriptor=self)

    def render(self, x: str = "x", y: str = "y") -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Monomial(Descriptor):
    alpha: Any = 0
    beta: Any = 0

    def __post_init__(self):
        for exponent in (self.alpha, self.beta):
            if not is_symbolic(exponent) and not exponent > -1:
                raise DomainError(f"monomial exponents must exceed -1, got ({self.alpha}, {self.beta})")

    def evaluate(self, x, y, ctx):
        return np.asarray(x, dtype=float) ** as_float(self.alpha) * np.asarray(y, dtype=float) ** as_float(self.beta)

    def instantiate(self, values):
        return Monomial(substitute(self.alpha, values), substitute(self.beta, values))

    def render(self, x="x", y="y"):
        parts = [
            Atom1D.monomial(self.alpha).render(x) if self.alpha != 0 else "",
            Atom1D.monomial(self.beta).render(y) if self.beta != 0 else "",
        ]
        parts = [p for p in parts if p]
        return "·".join(parts) if parts else "1"


@dataclass(frozen=True)
class Separable(Descriptor):
    gx: Atom1D
    hy: Atom1D

    def evaluate(self, x, y, ctx):
        return self.gx.evaluate(x, ctx) * self.hy.evaluate(y, ctx)

    def instantiate(self, values):
        return Separable(self.gx.instantiate(values), self.hy.instantiate(values))

    def render(self, x="x", y="y"):
        left, right = self.gx.render(x), self.hy.render(y)
        if right == "1":
            return left
        if left == "1":
            return right
        return f"{left}·{right}"


@dataclass(frozen=True)
class QAddPower(Descriptor):
    """(a x ∘ b y)^n under one of the q-addition laws."""

    a: Any
    b: Any
    n: int
    law: AdditionKind = AdditionKind.WARD_ADD

    def __post_init__(self):
        object.__setattr__(self, "law", AdditionKind(self.law))
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"q-addition power must be a non-negative integer, got {self.n}")

    def polynomial(self, ctx: QContext) -> QPoly2:
        return expand_q_addition(self.law, int(self.n), ctx).substitute_scaled(
            ctx.coerce(self.a), ctx.coerce(self.b)
        )

    def evaluate(self, x, y, ctx):
        fctx = ctx.floating()
        poly = expand_q_addition(self.law, int(self.n), fctx).substitute_scaled(as_float(self.a), as_float(self.b))
        return poly.evaluate(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def instantiate(self, values):
        return QAddPower(substitute(self.a, values), substitute(self.b, values), self.n, self.law)

    def render(self, x="x", y="y"):
        inner = f"{_scaled(self.a, x)} {self.law.symbol} {_scaled(self.b, y)}"
        if self.law.addition is AdditionKind.QPOW_ADD:
            return f"({inner})_q^{self.n}"
        return f"({inner})^{self.n}"


@dataclass(frozen=True)
class ExpQAdd(Descriptor):
    """e_q(a x ⊕_q b y) = e_q(ax) e_q(by) (small) or E_q(a x ⊞_q b y) = E_q(ax) E_q(by) (big)."""

    a: Any
    b: Any
    family: Family = Family.SMALL

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    def atoms(self) -> Tuple[Atom1D, Atom1D]:
        make = Atom1D.exp_small if self.family is Family.SMALL else Atom1D.exp_big
        return make(self.a), make(self.b)

    def evaluate(self, x, y, ctx):
        gx, hy = self.atoms()
        return gx.evaluate(x, ctx) * hy.evaluate(y, ctx)

    def instantiate(self, values):
        return ExpQAdd(substitute(self.a, values), substitute(self.b, values), self.family)

    def render(self, x="x", y="y"):
        name, op = ("e_q", "⊕_q") if self.family is Family.SMALL else ("E_q", "⊞_q")
        return f"{name}({_scaled(self.a, x)} {op} {_scaled(self.b, y)})"


@dataclass(frozen=True)
class TrigQAdd(Descriptor):
    """A q-trig function of (a x ⊕_q b y) or (a x ⊞_q b y), evaluated by its addition formula."""

    a: Any
    b: Any
    selector: TrigSelector = TrigSelector.COS_SMALL

    def __post_init__(self):
        object.__setattr__(self, "selector", TrigSelector(self.selector))

    @property
    def family(self) -> Family:
        return self.selector.family

    def expansion(self) -> List[Tuple[int, Atom1D, Atom1D]]:
        """Addition formula as a list of (sign, g(x), h(y)) products."""
        sel, partner = self.selector, self.selector.partner()
        same = Atom1D.trig
        base = sel.base
        if base in ("cos", "cosh"):
            sign = -1 if base == "cos" else 1
            return [
                (1, same(sel, self.a), same(sel, self.b)),
                (sign, same(partner, self.a), same(partner, self.b)),
            ]
        return [
            (1, same(sel, self.a), same(partner, self.b)),
            (1, same(partner, self.a), same(sel, self.b)),
        ]

    def evaluate(self, x, y, ctx):
        return sum(sign * g.evaluate(x, ctx) * h.evaluate(y, ctx) for sign, g, h in self.expansion())

    def instantiate(self, values):
        return TrigQAdd(substitute(self.a, values), substitute(self.b, values), self.selector)

    def render(self, x="x", y="y"):
        op = "⊕_q" if self.family is Family.SMALL else "⊞_q"
        return f"{self.selector.label}({_scaled(self.a, x)} {op} {_scaled(self.b, y)})"


@dataclass(frozen=True)
class SeriesQAdd(Descriptor):
    """f(alpha x ∘ beta y) for f(t) = sum a_n w_n t^n, applied coefficient-wise."""

    coeffs: Tuple[Any, ...]
    alpha: Any = 1
    beta: Any = 1
    family: Family = Family.SMALL

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "family", Family(self.family))
        if not self.coeffs:
            raise DomainError("SeriesQAdd needs at least one coefficient")

    @property
    def law(self) -> AdditionKind:
        return AdditionKind.WARD_ADD if self.family is Family.SMALL else AdditionKind.COADD

    def polynomial(self, ctx: QContext) -> QPoly2:
        return series_q_compose(self.coeffs, self.law, self.alpha, self.beta, ctx)

    def evaluate(self, x, y, ctx):
        fctx = ctx.floating()
        poly = series_q_compose(
            [as_float(c) for c in self.coeffs], self.law, as_float(self.alpha), as_float(self.beta), fctx
        )
        return poly.evaluate(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def instantiate(self, values):
        return SeriesQAdd(
            tuple(substitute(c, values) for c in self.coeffs),
            substitute(self.alpha, values),
            substitute(self.beta, values),
            self.family,
        )

    def render(self, x="x", y="y"):
        op = "⊕_q" if self.family is Family.SMALL else "⊞_q"
        coeffs = ",".join(fmt(c) for c in self.coeffs)
        return f"f[{coeffs}]({_scaled(self.alpha, x)} {op} {_scaled(self.beta, y)})"


@dataclass(frozen=True)
class LinearCombo(Descriptor):
    terms: Tuple[Tuple[Any, Descriptor], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((c, d) for c, d in self.terms))

    def evaluate(self, x, y, ctx):
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.broadcast(x, np.asarray(y, dtype=float)).shape)
        for c, d in self.terms:
            total = total + as_float(c) * d.evaluate(x, y, ctx)
        return total if total.ndim else float(total)

    def instantiate(self, values):
        return LinearCombo(tuple((substitute(c, values), d.instantiate(values)) for c, d in self.terms))

    def render(self, x="x", y="y"):
        if not self.terms:
            return "0"
        parts = []
        for c, d in self.terms:
            body = d.render(x, y)
            if c == 1:
                parts.append(body)
            elif body == "1":
                parts.append(fmt(c))
            else:
                parts.append(f"{fmt(c)}·{body}")
        return " + ".join(parts)


FunctionDescriptor = Union[Monomial, Separable, QAddPower, ExpQAdd, TrigQAdd, SeriesQAdd, LinearCombo]


def separable_terms(descriptor: Descriptor) -> Optional[List[Tuple[Any, Atom1D, Atom1D]]]:
    """
    Split a descriptor into products g(x) h(y) with scalar weights, or None when
    some part is not a finite sum of such products in atom form.
    """
    if isinstance(descriptor, Monomial):
        return [(1, Atom1D.monomial(descriptor.alpha), Atom1D.monomial(descriptor.beta))]
    if isinstance(descriptor, Separable):
        return [(1, descriptor.gx, descriptor.hy)]
    if isinstance(descriptor, ExpQAdd):
        gx, hy = descriptor.atoms()
        return [(1, gx, hy)]
    if isinstance(descriptor, TrigQAdd):
        return [(sign, g, h) for sign, g, h in descriptor.expansion()]
    if isinstance(descriptor, LinearCombo):
        pieces = []
        for c, d in descriptor.terms:
            inner = separable_terms(d)
            if inner is None:
                return None
            pieces.extend((c * w, g, h) for w, g, h in inner)
        return pieces
    return None


def polynomial_descriptor(poly: QPoly2) -> LinearCombo:
    """A QPoly2 as a linear combination of monomials; the zero polynomial gives LinearCombo(())."""
    return LinearCombo(tuple((c, Monomial(i, j)) for (i, j), c in poly.terms))


def free_symbols(descriptor) -> set:
    found = set()

    def visit(value):
        if isinstance(value, sympy.Basic):
            found.update(value.free_symbols)
        elif isinstance(value, (Atom1D, Descriptor)):
            for name in value.__dataclass_fields__:
                visit(getattr(value, name))
        elif isinstance(value, (tuple, list)):
            for item in value:
                visit(item)

    visit(descriptor)
    return found


def iter_descriptors(descriptor: Descriptor) -> Iterable[Descriptor]:
    yield descriptor
    if isinstance(descriptor, LinearCombo):
        for _, d in descriptor.terms:
            yield from iter_descriptors(d)


def power_series_coefficients(atom: Atom1D, degree: int, ctx: QContext) -> List:
    """
    Taylor coefficients b_0..b_degree of an atom (exact in exact mode).

    Raises:
        DomainError: non-integer monomial exponent or a symbolic parameter
    """
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    if is_symbolic(atom.parameter):
        raise DomainError(f"{atom} has a symbolic parameter; instantiate it first")
    zero = ctx.coerce(0)
    if atom.tag is AtomTag.CONSTANT:
        return [ctx.coerce(atom.parameter)] + [zero] * degree
    if atom.tag is AtomTag.MONOMIAL:
        if not is_integral(atom.parameter):
            raise DomainError(f"t^{atom.parameter} has no power series at 0")
        coeffs = [zero] * (degree + 1)
        if int(atom.parameter) <= degree:
            coeffs[int(atom.parameter)] = ctx.coerce(1)
        return coeffs
    if atom.tag is AtomTag.EXP_SMALL:
        return exp_series_coefficients(atom.parameter, Family.SMALL, degree, ctx)
    if atom.tag is AtomTag.EXP_BIG:
        return exp_series_coefficients(atom.parameter, Family.BIG, degree, ctx)
    return trig_series_coefficients(atom.selector, atom.parameter, degree, ctx)
