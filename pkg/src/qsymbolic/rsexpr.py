"""
Closed-form transform images in the variables (r, s).

An RSExpr is a sum of atoms, each a sympy expression with its coefficient split
off and a provenance label. Argument substitutions such as r -> r/q are applied
symbolically, so images stay exactly evaluable after any assembly step.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Optional, Tuple

import sympy

R, S = sympy.symbols("r s", positive=True)


def to_sympy(value) -> sympy.Expr:
    """Exact sympy image of a scalar: Fractions and decimal floats become Rationals."""
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, numbers.Integral):
        return sympy.Integer(int(value))
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        return sympy.Rational(repr(value))
    if isinstance(value, numbers.Rational):
        return sympy.Rational(int(value.numerator), int(value.denominator))
    return sympy.sympify(value)


def from_sympy(value: sympy.Expr):
    """Plain Python scalar for a numeric sympy value (Fraction when rational)."""
    if value.is_Integer:
        return Fraction(int(value))
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return float(value)


def split_coefficient(expr: sympy.Expr) -> Tuple[sympy.Expr, sympy.Expr]:
    """Split expr into (part free of r and s, remaining factor)."""
    if not expr.has(R, S):
        return expr, sympy.Integer(1)
    if expr.is_Mul:
        coefficient, rest = expr.as_independent(R, S, as_Add=False)
        return coefficient, rest
    return sympy.Integer(1), expr


@dataclass(frozen=True)
class RSAtom:
    coefficient: sympy.Expr
    expression: sympy.Expr
    provenance: str = ""

    @property
    def value(self) -> sympy.Expr:
        return self.coefficient * self.expression


@dataclass(frozen=True)
class RSExpr:
    """
    Sum of catalog atoms in (r, s), plus the convergence region the image was derived on.

    Business Logic:
    - atoms keep the closed form each construction step produced, with its provenance
    - region holds sympy inequalities in r and s; evaluating outside them is allowed
      (the rational function exists) but in_region reports it
    - evaluation is exact (Fraction) for exact inputs and rational atoms, float otherwise
    """

    atoms: Tuple[RSAtom, ...] = ()
    region: Tuple[sympy.Basic, ...] = ()

    # -- construction -------------------------------------------------------

    @classmethod
    def of(cls, expr, provenance: str = "", region: Iterable[sympy.Basic] = ()) -> RSExpr:
        expr = to_sympy(expr)
        if expr == 0:
            return cls((), tuple(region))
        coefficient, rest = split_coefficient(expr)
        return cls((RSAtom(coefficient, rest, provenance),), tuple(region))

    @classmethod
    def zero(cls) -> RSExpr:
        return cls()

    # -- algebra ------------------------------------------------------------

    @property
    def total(self) -> sympy.Expr:
        return sympy.Add(*(atom.value for atom in self.atoms))

    @property
    def is_zero(self) -> bool:
        return not self.atoms or sympy.cancel(sympy.together(self.total)) == 0

    def __add__(self, other) -> RSExpr:
        if not isinstance(other, RSExpr):
            other = RSExpr.of(other, "constant")
        kind = SExpr if isinstance(self, SExpr) and isinstance(other, SExpr) else RSExpr
        return kind(self.atoms + other.atoms, _merge(self.region, other.region))

    __radd__ = __add__

    def __neg__(self) -> RSExpr:
        return self.scale(-1)

    def __sub__(self, other) -> RSExpr:
        if not isinstance(other, RSExpr):
            other = RSExpr.of(other, "constant")
        return self + (-other)

    def scale(self, factor, label: Optional[str] = None) -> RSExpr:
        factor = to_sympy(factor)
        if factor == 0:
            return type(self)((), self.region)
        atoms = tuple(
            RSAtom(atom.coefficient * factor, atom.expression, _label(atom.provenance, label))
            for atom in self.atoms
        )
        return type(self)(atoms, self.region)

    def __mul__(self, other) -> RSExpr:
        if not isinstance(other, RSExpr):
            return self.scale(other)
        atoms = []
        for left in self.atoms:
            for right in other.atoms:
                provenance = " × ".join(p for p in (left.provenance, right.provenance) if p)
                atoms.append(
                    RSAtom(left.coefficient * right.coefficient, left.expression * right.expression, provenance)
                )
        return RSExpr(tuple(atoms), _merge(self.region, other.region))

    __rmul__ = __mul__

    def substitute(self, mapping: Dict[sympy.Symbol, sympy.Expr], label: Optional[str] = None) -> RSExpr:
        """Structural argument substitution, e.g. {R: R / q}."""
        mapping = {k: to_sympy(v) for k, v in mapping.items()}
        if label is None:
            label = ", ".join(f"{k}↦{v}" for k, v in mapping.items())
        atoms = tuple(
            RSAtom(atom.coefficient, atom.expression.subs(mapping, simultaneous=True), _label(atom.provenance, label))
            for atom in self.atoms
        )
        region = tuple(cond.subs(mapping, simultaneous=True) for cond in self.region)
        return RSExpr(atoms, tuple(c for c in region if c is not sympy.true))

    def with_region(self, *conditions: sympy.Basic) -> RSExpr:
        return type(self)(self.atoms, _merge(self.region, conditions))

    @property
    def free_symbols(self) -> set:
        return self.total.free_symbols - {R, S}

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, r=None, s=None):
        """
        Value at numeric (r, s); exact (Fraction) when both are exact and the atoms are rational.
        """
        if self.free_symbols:
            raise ValueError(f"expression still has free parameters {sorted(map(str, self.free_symbols))}")
        if isinstance(r, float) or isinstance(s, float):
            return float(self._numeric(_num(r), _num(s)))
        value = self.total.subs({R: to_sympy(r if r is not None else 1), S: to_sympy(s if s is not None else 1)})
        return from_sympy(value)

    @cached_property
    def _numeric(self):
        return sympy.lambdify((R, S), self.total, modules="mpmath")

    def in_region(self, r, s) -> bool:
        values = {R: to_sympy(r), S: to_sympy(s)}
        return all(bool(cond.subs(values)) for cond in self.region)

    def __str__(self) -> str:
        return str(self.total) if self.atoms else "0"


class SExpr(RSExpr):
    """A one-variable image, written in s; `at` places it at any argument."""

    def at(self, argument) -> sympy.Expr:
        return self.total.subs(S, to_sympy(argument))

    def in_variable(self, argument, label: Optional[str] = None) -> RSExpr:
        return RSExpr.substitute(self, {S: argument}, label=label or "")


def _num(value) -> float:
    return 1.0 if value is None else float(value)


def _label(provenance: str, label: Optional[str]) -> str:
    if not label:
        return provenance
    return f"{provenance} [{label}]" if provenance else f"[{label}]"


def _merge(first: Tuple, second: Iterable) -> Tuple:
    merged = list(first)
    for cond in second:
        if cond not in merged:
            merged.append(cond)
    return tuple(merged)
