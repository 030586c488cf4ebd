"""
Text grammar for integrands on the command line.

Two-variable descriptors:
    mono:a,b                 x^a y^b
    qaddpow:a,b,n[,law]      (a x ∘ b y)^n, law one of ward_add, ward_sub, coadd,
                             cosub, qpow_add, qpow_sub (default ward_add)
    expqadd:a,b[,family]     e_q(ax ⊕_q by) (small) or E_q(ax ⊞_q by) (big)
    trig:sel,a,b[,family]    sel one of cos, sin, cosh, sinh
    series:c0,c1,...@a,b[,family]
    sep:atom|atom            g(x) h(y)
    lin:c1*d1+c2*d2          linear combination (terms without '*' have weight 1)

One-variable atoms:
    zero, const:c, mono:a, eq:a, Eq:a, trig:sel_family,a
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List

from qcore.context import is_integral, parse_scalar
from qcore.errors import DomainError
from qcore.qpoly import AdditionKind
from qspecial.exponential import Family, TrigSelector
from qtransform.descriptors import (
    Atom1D,
    Descriptor,
    ExpQAdd,
    LinearCombo,
    Monomial,
    QAddPower,
    SeriesQAdd,
    Separable,
    TrigQAdd,
)

_LAW_ALIASES = {"ward": "ward_add", "qpow": "qpow_add", "add": "ward_add", "sub": "ward_sub"}
# "+" between lin terms; the sign of a float exponent such as 1e+3 is not a separator
_LIN_SPLIT = re.compile(r"(?<![0-9.][eE])\+")


def scalar(text: str):
    """Exact scalar; integral values come back as int."""
    value = parse_scalar(text)
    return int(value) if is_integral(value) else value


def _fields(body: str, low: int, high: int, form: str) -> List[str]:
    parts = [p.strip() for p in body.split(",")] if body.strip() else []
    if not low <= len(parts) <= high:
        raise DomainError(f"expected {form}, got {body!r}")
    return parts


def _family(text: str) -> Family:
    try:
        return Family(text.lower())
    except ValueError as exc:
        raise DomainError(f"unknown family {text!r} (small or big)") from exc


def _selector(name: str, family: Family) -> TrigSelector:
    try:
        return TrigSelector.of(name.lower(), family)
    except ValueError as exc:
        raise DomainError(f"unknown q-trig function {name!r}") from exc


def _law(text: str) -> AdditionKind:
    text = text.lower()
    try:
        return AdditionKind(_LAW_ALIASES.get(text, text))
    except ValueError as exc:
        raise DomainError(f"unknown q-addition law {text!r}") from exc


def _split_head(text: str):
    head, sep, body = text.strip().partition(":")
    if not sep:
        return head, ""
    return head, body


def parse_atom(text: str) -> Atom1D:
    """
    Parse a one-variable atom.

    Note: 'eq' is e_q and 'Eq' is E_q, so the head is case-sensitive.
    """
    head, body = _split_head(text)
    if head == "zero":
        return Atom1D.constant(0)
    if head == "const":
        (value,) = _fields(body, 1, 1, "const:c")
        return Atom1D.constant(scalar(value))
    if head == "mono":
        (alpha,) = _fields(body, 1, 1, "mono:a")
        return Atom1D.monomial(scalar(alpha))
    if head in ("eq", "exp_small"):
        (rate,) = _fields(body, 1, 1, "eq:a")
        return Atom1D.exp_small(scalar(rate))
    if head in ("Eq", "exp_big"):
        (rate,) = _fields(body, 1, 1, "Eq:a")
        return Atom1D.exp_big(scalar(rate))
    if head == "trig":
        name, rate = _fields(body, 2, 2, "trig:sel_family,a")
        try:
            selector = TrigSelector(name.lower())
        except ValueError as exc:
            raise DomainError(f"unknown q-trig selector {name!r}, e.g. cos_small") from exc
        return Atom1D.trig(selector, scalar(rate))
    raise DomainError(f"unknown atom {text!r}")


def parse_descriptor(text: str) -> Descriptor:
    """Parse a two-variable integrand descriptor."""
    head, body = _split_head(text)
    if head == "mono":
        a, b = _fields(body, 2, 2, "mono:a,b")
        return Monomial(scalar(a), scalar(b))
    if head == "qaddpow":
        parts = _fields(body, 3, 4, "qaddpow:a,b,n[,law]")
        n = scalar(parts[2])
        if not is_integral(n):
            raise DomainError(f"q-addition power must be an integer, got {parts[2]!r}")
        law = _law(parts[3]) if len(parts) == 4 else AdditionKind.WARD_ADD
        return QAddPower(scalar(parts[0]), scalar(parts[1]), int(n), law)
    if head == "expqadd":
        parts = _fields(body, 2, 3, "expqadd:a,b[,family]")
        family = _family(parts[2]) if len(parts) == 3 else Family.SMALL
        return ExpQAdd(scalar(parts[0]), scalar(parts[1]), family)
    if head == "trig":
        parts = _fields(body, 3, 4, "trig:sel,a,b[,family]")
        family = _family(parts[3]) if len(parts) == 4 else Family.SMALL
        return TrigQAdd(scalar(parts[1]), scalar(parts[2]), _selector(parts[0], family))
    if head == "series":
        coeffs, at, rest = body.partition("@")
        values = [scalar(c) for c in _fields(coeffs, 1, 64, "series:c0,c1,...@a,b[,family]")]
        alpha, beta, family = 1, 1, Family.SMALL
        if at:
            parts = _fields(rest, 2, 3, "series:...@a,b[,family]")
            alpha, beta = scalar(parts[0]), scalar(parts[1])
            if len(parts) == 3:
                family = _family(parts[2])
        return SeriesQAdd(tuple(values), alpha, beta, family)
    if head == "sep":
        left, bar, right = body.partition("|")
        if not bar:
            raise DomainError(f"expected sep:atom|atom, got {body!r}")
        return Separable(parse_atom(left), parse_atom(right))
    if head == "lin":
        terms = []
        for chunk in _LIN_SPLIT.split(body):
            if not chunk.strip():
                raise DomainError(f"empty term in {text!r}")
            weight, star, inner = chunk.partition("*")
            if star:
                terms.append((scalar(weight), parse_descriptor(inner)))
            else:
                terms.append((1, parse_descriptor(chunk)))
        return LinearCombo(tuple(terms))
    raise DomainError(f"unknown descriptor {text!r}")


def render_scalar(value) -> str:
    """Fractions as 'p/q', floats with repr precision."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    return str(value)
