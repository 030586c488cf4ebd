"""
q-Cauchy and q-Abel functional equations solved by the double transform:
transform both sides, separate variables, invert the one-variable image.
"""

from __future__ import annotations

from typing import List, Tuple

import sympy

from qapps.models import EquationId, SolutionReport
from qcore.context import QContext
from qcore.errors import DomainError, ResidualError
from qcore.qpoly import AdditionKind, QPoly2, series_q_compose, series_weight
from qsymbolic.inverse import inverse_catalog_1d
from qsymbolic.rsexpr import R, S, RSExpr
from qtransform.descriptors import AtomTag, Descriptor, LinearCombo, Monomial, Separable
from qtransform.double import TransformKind

FUNCTIONAL_DEGREE = 12

# free constant of the one-parameter solution families
K = sympy.Symbol("k")

_SETUP = {
    EquationId.CAUCHY_WARD: (TransformKind.K1, AdditionKind.WARD_ADD, "additive"),
    EquationId.CAUCHY_COADD: (TransformKind.K2, AdditionKind.COADD, "additive"),
    EquationId.ABEL_WARD: (TransformKind.K1, AdditionKind.WARD_ADD, "multiplicative"),
    EquationId.ABEL_COADD: (TransformKind.K2, AdditionKind.COADD, "multiplicative"),
}


def transformed_equation(equation: EquationId) -> Tuple[sympy.Expr, sympy.Function]:
    """
    Both sides under the matching double transform, as lhs - rhs in F(r), F(s).

    f(x ∘ y) has image (F(r) - F(s)) / (s - r) by the series-composition rule;
    f(x) + f(y) has F(r)/s + F(s)/r and f(x) f(y) has F(r) F(s).
    """
    _, _, form = _SETUP[equation]
    F = sympy.Function("F")
    composed = (F(R) - F(S)) / (S - R)
    if form == "additive":
        return composed - (F(R) / S + F(S) / R), F
    return composed - F(R) * F(S), F


def separate(equation_expr: sympy.Expr, F: sympy.Function) -> Tuple[sympy.Expr, sympy.Expr]:
    """
    Solve for F(r) and collapse the s-dependence into the free constant k.

    Returns (F(r) with k, the expression in s and F(s) that k stands for).

    Raises:
        DomainError: the equation does not separate with exactly one constant
    """
    fr, fs = sympy.symbols("f_r f_s")
    substituted = sympy.together(equation_expr.subs({F(R): fr, F(S): fs}))
    numerator, _ = sympy.fraction(substituted)
    solutions = sympy.solve(numerator, fr)
    if len(solutions) != 1:
        raise DomainError(f"expected one solution for F(r), got {solutions}")
    phi = sympy.cancel(solutions[0])
    num, den = sympy.fraction(phi)
    lead = sympy.Poly(den, R).LC()
    num_poly = sympy.Poly(sympy.cancel(num / lead), R)
    den_poly = sympy.Poly(sympy.cancel(den / lead), R)
    constants = {c for c in num_poly.coeffs() + den_poly.coeffs() if c.has(S, fs)}
    if len(constants) != 1:
        raise DomainError(f"equation does not separate with a single constant: {sorted(map(str, constants))}")
    constant = constants.pop()

    def rebuild(poly: sympy.Poly) -> sympy.Expr:
        return sympy.Add(*((K if c == constant else c) * R ** m for (m,), c in poly.terms()))

    return rebuild(num_poly) / rebuild(den_poly), constant.subs(fs, F(S))


def _taylor(descriptor: Descriptor, ctx: QContext) -> List:
    """Taylor coefficients of a solution that depends on x only."""
    if isinstance(descriptor, Monomial) and descriptor.beta == 0:
        coeffs = [ctx.coerce(0)] * (FUNCTIONAL_DEGREE + 1)
        if int(descriptor.alpha) <= FUNCTIONAL_DEGREE:
            coeffs[int(descriptor.alpha)] = ctx.coerce(1)
        return coeffs
    if isinstance(descriptor, Separable) and descriptor.hy.tag is AtomTag.CONSTANT:
        weight = ctx.coerce(descriptor.hy.parameter)
        return [weight * b for b in descriptor.gx.series_coefficients(FUNCTIONAL_DEGREE, ctx)]
    if isinstance(descriptor, LinearCombo):
        total = [ctx.coerce(0)] * (FUNCTIONAL_DEGREE + 1)
        for c, d in descriptor.terms:
            total = [t + ctx.coerce(c) * b for t, b in zip(total, _taylor(d, ctx))]
        return total
    raise DomainError(f"{descriptor} is not a function of x alone")


def coefficient_residual(equation: EquationId, descriptor: Descriptor, ctx: QContext) -> QPoly2:
    """
    f(x ∘ y) minus the right-hand side, coefficient-wise to FUNCTIONAL_DEGREE.

    f(x ∘ y) is read as sum b_n (x ∘ y)^n through series_q_compose, whose
    coefficients are a_n = b_n / w_n (a_n = b_n [n]! for Ward, b_n [n]! / q^binom(n,2)
    for coaddition).
    """
    _, law, form = _SETUP[equation]
    b = _taylor(descriptor, ctx)
    a = [b_n / series_weight(n, law, ctx) for n, b_n in enumerate(b)]
    composed = series_q_compose(a, law, 1, 1, ctx).truncate(FUNCTIONAL_DEGREE)
    fx, fy = QPoly2.univariate(b, "x"), QPoly2.univariate(b, "y")
    expected = fx + fy if form == "additive" else (fx * fy).truncate(FUNCTIONAL_DEGREE)
    return composed - expected


def solve_functional(equation: EquationId, ctx: QContext, k_value=1) -> SolutionReport:
    """
    Solve one of the four functional equations by the transform method.

    Business Logic:
    - Ward-law equations use the first-kind double transform, coaddition-law
      equations the second kind
    - the transformed equation is solved for F(r); whatever depends on s is the
      separation constant k
    - F(r) is inverted as the image of a function of x alone, keeping k symbolic
    - the solution is checked exactly at k = k_value, coefficient by coefficient
      to total degree FUNCTIONAL_DEGREE

    Raises:
        NoMatchError: the separated image is not in the catalog
        ResidualError: the coefficient residual is not exactly zero
    """
    equation = EquationId(equation)
    if not equation.is_functional:
        raise DomainError(f"{equation.value} is not a functional equation")
    exact = ctx.exact()
    kind, _, _ = _SETUP[equation]

    expr, F = transformed_equation(equation)
    image_1d, constant = separate(expr, F)
    descriptor = inverse_catalog_1d(image_1d, kind, exact)

    residual = coefficient_residual(equation, descriptor.instantiate({K: k_value}), exact)
    residual_max = residual.max_abs_coefficient()
    if residual_max != 0:
        raise ResidualError(f"{equation.value}: coefficient residual {residual_max} is not zero", residual_max)

    return SolutionReport(
        equation=equation,
        descriptor=descriptor,
        transform_domain=RSExpr.of(image_1d / S, f"{kind.value} image of f(x)"),
        residual_max=residual_max,
        lattice_points_checked=(FUNCTIONAL_DEGREE + 1) * (FUNCTIONAL_DEGREE + 2) // 2,
        checks={"one_variable_image": str(image_1d), "separation_constant": f"k = {constant}"},
    )
