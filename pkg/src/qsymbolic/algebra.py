"""
Algebra on closed-form images: normalization, partial fractions in one variable,
and splitting an image into products of one-variable factors.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

import sympy

from qcore.errors import DomainError, UnsupportedMultiplicityError
from qsymbolic.rsexpr import R, S, RSExpr, SExpr, to_sympy

Image = Union[RSExpr, sympy.Expr]


def as_expression(image: Image) -> sympy.Expr:
    if isinstance(image, RSExpr):
        return image.total
    return to_sympy(image)


def normalize(image: RSExpr) -> RSExpr:
    """
    One canonical atom: the image put over a common denominator with common
    factors cancelled. Evaluation is unchanged at every point.
    """
    combined = sympy.cancel(sympy.together(image.total))
    kind = type(image)
    if combined == 0:
        return kind((), image.region)
    provenance = "; ".join(dict.fromkeys(a.provenance for a in image.atoms if a.provenance))
    return kind.of(combined, f"normalized({provenance})" if provenance else "normalized", image.region)


def _check_multiplicity(denominator: sympy.Expr, var: sympy.Symbol) -> None:
    _, factors = sympy.factor_list(denominator, var)
    for factor, multiplicity in factors:
        if factor.has(var) and multiplicity > 1:
            raise UnsupportedMultiplicityError(f"factor ({factor})^{multiplicity} is repeated in {var}")


def partial_fractions(
    numerator,
    factors: Sequence,
    var: sympy.Symbol = S,
) -> RSExpr:
    """
    Residue decomposition of numerator / prod(factors) in var.

    Business Logic:
    - factors are distinct linear or quadratic polynomials in var; other symbols
      (for instance r when decomposing in s) are parameters
    - exact rational arithmetic throughout; each summand becomes one atom

    Raises:
        UnsupportedMultiplicityError: a factor repeats
        DomainError: the numerator degree is not below the denominator degree
    """
    numerator = to_sympy(numerator)
    factors = [to_sympy(f) for f in factors]
    if len(set(sympy.expand(f) for f in factors)) != len(factors):
        raise UnsupportedMultiplicityError("partial fractions need distinct factors")
    denominator = sympy.Mul(*factors)
    _check_multiplicity(denominator, var)
    if sympy.degree(numerator, var) >= sympy.degree(denominator, var):
        raise DomainError(f"numerator degree must be below the denominator degree in {var}")
    return _decompose(numerator / denominator, var)


def partial_fractions_of(expr: Image, var: sympy.Symbol = S) -> RSExpr:
    """partial_fractions for an expression whose denominator is already factored or factorable."""
    expr = sympy.cancel(sympy.together(as_expression(expr)))
    _, denominator = sympy.fraction(expr)
    _check_multiplicity(denominator, var)
    return _decompose(expr, var)


def _apart(expr: sympy.Expr, var: sympy.Symbol) -> sympy.Expr:
    # fractional powers such as r^(3/2) are not rational functions; keep them whole
    try:
        return sympy.apart(expr, var)
    except (sympy.PolynomialError, NotImplementedError):
        return expr


def _decompose(expr: sympy.Expr, var: sympy.Symbol) -> RSExpr:
    pieces = sympy.Add.make_args(_apart(expr, var))
    kind = RSExpr if any(p.has(R) for p in pieces) else SExpr
    total = kind()
    for piece in pieces:
        total = total + kind.of(piece, f"partial fraction in {var}")
    return total


def separable_decomposition(image: Image) -> Optional[List[Tuple[sympy.Expr, sympy.Expr]]]:
    """
    Write the image as sum_k X_k(r) Y_k(s), or None when some summand mixes r and s.

    Partial fractions in r first, then in s for each summand.
    """
    expr = sympy.cancel(sympy.together(as_expression(image)))
    if expr == 0:
        return []
    pieces = []
    for term in sympy.Add.make_args(_apart(expr, R)):
        for inner in sympy.Add.make_args(_apart(sympy.cancel(term), S)):
            x_part, y_part = sympy.Integer(1), sympy.Integer(1)
            for factor in sympy.Mul.make_args(sympy.factor(inner)):
                if factor.has(R) and factor.has(S):
                    return None
                if factor.has(S):
                    y_part *= factor
                else:
                    x_part *= factor
            pieces.append((x_part, y_part))
    return pieces
