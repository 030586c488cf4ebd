"""
q-transport, q-telegraph and q-wave equations in the quarter plane: the
transform-domain derivation, inversion, and a lattice residual check.
"""

from __future__ import annotations

from typing import Callable, Iterable, List, Optional, Tuple

import sympy

import config
from qapps.functional import solve_functional
from qapps.models import EquationId, EquationSpec, SolutionReport
from qcalc.derivative import q_partial
from qcore.context import QContext
from qcore.errors import (
    DomainError,
    NoMatchError,
    QLabError,
    ResidualError,
    UnsupportedMultiplicityError,
)
from qspecial.exponential import Family
from qsymbolic.algebra import normalize, partial_fractions_of
from qsymbolic.inverse import inverse_catalog
from qsymbolic.rsexpr import R, S, RSExpr, SExpr, to_sympy
from qtransform.descriptors import Atom1D, Descriptor, ExpQAdd, LinearCombo
from qtransform.double import TransformKind, qlap2d_catalog, qlap2d_numeric
from qtransform.operators import BoundaryData, derivative_image
from qtransform.single import qlap1d_catalog

LATTICE_SIZE = 5
X_BASE = 0.9
T_BASE = 0.8
CHECK_POINT = (2.0, 2.0)
TRANSPORT_CHECK_POINT = (2.0, 3.0)
TRANSFORM_CHECK_TOL = 1e-8

KIND = TransformKind.K1
U = sympy.Function("U")(R, S)


def residual_lattice(ctx: QContext) -> List[Tuple[float, float]]:
    """The 5 x 5 points (q^i * 0.9, q^j * 0.8) inside (0, 1)^2."""
    q = ctx.q_float
    return [(q ** i * X_BASE, q ** j * T_BASE) for i in range(LATTICE_SIZE) for j in range(LATTICE_SIZE)]


def _unknown() -> RSExpr:
    return RSExpr.of(U, "U(r, s)")


def _solve_for_image(equation: RSExpr) -> sympy.Expr:
    """The 'use the conditions and simplify' step: solve the linear equation for U."""
    solutions = sympy.solve(equation.total, U)
    if len(solutions) != 1:
        raise DomainError(f"transformed equation has {len(solutions)} solutions for U")
    return sympy.cancel(sympy.together(solutions[0]))


def _invert(expr: sympy.Expr, ctx: QContext) -> Tuple[Optional[Descriptor], Optional[RSExpr]]:
    """
    Inverse lookup, then term-by-term lookup of the partial fractions in s.
    Returns (descriptor or None, partial fractions when they were formed).
    """
    try:
        return inverse_catalog(expr, KIND, ctx), None
    except NoMatchError:
        pass
    try:
        fractions = partial_fractions_of(expr, S)
    except (UnsupportedMultiplicityError, DomainError):
        return None, None
    terms = []
    for atom in fractions.atoms:
        try:
            terms.append((1, inverse_catalog(atom.value, KIND, ctx)))
        except NoMatchError:
            return None, fractions
    return LinearCombo(tuple(terms)), fractions


def _enforce(report: SolutionReport, residuals: Iterable[float], points: int) -> SolutionReport:
    report.residual_max = max((abs(float(v)) for v in residuals), default=0.0)
    report.lattice_points_checked = points
    if not report.residual_max < config.RESIDUAL_TOL:
        raise ResidualError(f"{report.equation.value} solution fails its lattice check", report.residual_max)
    return report


def _in_region_point(descriptor: Descriptor, point, ctx: QContext, attempts: int = 4):
    """point, doubled until it lies in the region of the descriptor's catalog image."""
    r, s = point
    try:
        image = qlap2d_catalog(descriptor, KIND, ctx)
    except QLabError:
        return r, s
    for _ in range(attempts):
        if image.in_region(r, s):
            break
        r, s = 2 * r, 2 * s
    return r, s


def _transform_check(report: SolutionReport, solution: Descriptor, ctx: QContext, point=CHECK_POINT) -> None:
    """
    Numeric transform of the solution against the transform-domain value.

    Raises:
        ResidualError: the two values differ by more than TRANSFORM_CHECK_TOL
        DivergenceError: the numeric transform has no finite value at the point
    """
    r, s = _in_region_point(solution, point, ctx)
    numeric = qlap2d_numeric(solution, r, s, KIND, ctx)
    try:
        closed = float(report.transform_domain.evaluate(r, s))
    except ZeroDivisionError:
        closed = float("inf")
    rel_diff = abs(numeric - closed) / abs(closed) if closed else abs(numeric)
    report.checks["transform_point"] = [r, s]
    report.checks["transform_numeric"] = numeric
    report.checks["transform_catalog"] = closed
    report.checks["transform_rel_diff"] = rel_diff
    if not rel_diff < TRANSFORM_CHECK_TOL:
        raise ResidualError(
            f"{report.equation.value} transform-domain value disagrees with the numeric "
            f"transform at (r, s) = ({r}, {s})",
            rel_diff,
        )


def _d(u: Callable, orders: Tuple[int, int], point, ctx: QContext) -> float:
    return q_partial(u, "x", point, orders, ctx)


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------


def solve_transport(c, f: Atom1D, g: Atom1D, ctx: QContext) -> SolutionReport:
    """
    D_t u + c D_x u = 0 with u(x, 0) = f(x) and u(0, t) = g(t).

    Business Logic:
    - first-kind double transform, t on the s axis: s U - L[f](r) + c (r U - L[g](s)) = 0
    - U = (L[f](r) + c L[g](s)) / (s + c r), normalised and inverted
    - an inverted u is checked on the 5 x 5 lattice: the equation and both
      boundary conditions; a failing check raises
    - no catalog match leaves the descriptor empty and inversion_complete False

    Raises:
        ResidualError: the inverted solution fails the lattice check
    """
    if c == 0:
        raise DomainError("transport equation needs c != 0")
    boundary = BoundaryData(
        x_traces={0: qlap1d_catalog(g, KIND.y_side, ctx)},
        y_traces={0: qlap1d_catalog(f, KIND.x_side, ctx)},
    )
    image = _unknown()
    equation = derivative_image(KIND, "dy", image, boundary, ctx) + derivative_image(
        KIND, "dx", image, boundary, ctx
    ).scale(to_sympy(c))
    transform = normalize(RSExpr.of(_solve_for_image(equation), "transport"))
    descriptor, fractions = _invert(transform.total, ctx)
    report = SolutionReport(
        equation=EquationId.TRANSPORT,
        descriptor=descriptor,
        transform_domain=transform,
        inversion_complete=descriptor is not None,
        partial_fractions=fractions,
    )
    if descriptor is None:
        return report

    fctx = ctx.floating()
    u = descriptor.as_lattice_function(fctx)
    c_value = float(c)
    points = residual_lattice(fctx)
    residuals = []
    for x, t in points:
        residuals.append(_d(u, (0, 1), (x, t), fctx) + c_value * _d(u, (1, 0), (x, t), fctx))
        residuals.append(u(x, 0.0) - f.evaluate(x, fctx))
        residuals.append(u(0.0, t) - g.evaluate(t, fctx))
    _enforce(report, residuals, len(points))
    _transform_check(report, descriptor, ctx, TRANSPORT_CHECK_POINT)
    return report


# ---------------------------------------------------------------------------
# telegraph
# ---------------------------------------------------------------------------


def verify_telegraph(c, alpha, beta, ctx: QContext) -> SolutionReport:
    """
    c^2 u_xx - u_tt - (alpha+beta) u_t - alpha beta u = [c^2 - (alpha+1)(beta+1)] e_q(x) e_q(t)
    with every trace equal to e_q of the free variable.

    The derivation is replayed through the derivative theorems and must give
    U = 1/((r-1)(s-1)); the solution e_q(x ⊕_q t) is then checked on the lattice
    and through its numeric transform at (2, 2).
    """
    rate = Atom1D.exp_small(1)
    trace = qlap1d_catalog(rate, KIND.x_side, ctx)
    boundary = BoundaryData(x_traces={0: trace, 1: trace}, y_traces={0: trace, 1: trace})
    c2, a, b = to_sympy(c) ** 2, to_sympy(alpha), to_sympy(beta)
    forcing = c2 - (a + 1) * (b + 1)
    solution = ExpQAdd(1, 1, Family.SMALL)

    image = _unknown()
    equation = (
        derivative_image(KIND, "dxx", image, boundary, ctx).scale(c2)
        - derivative_image(KIND, "dyy", image, boundary, ctx)
        - derivative_image(KIND, "dy", image, boundary, ctx).scale(a + b)
        - image.scale(a * b)
        - qlap2d_catalog(solution, KIND, ctx).scale(forcing)
    )
    transform = normalize(RSExpr.of(_solve_for_image(equation), "telegraph"))
    expected = 1 / ((R - 1) * (S - 1))
    descriptor, fractions = _invert(transform.total, ctx)
    report = SolutionReport(
        equation=EquationId.TELEGRAPH,
        descriptor=descriptor,
        transform_domain=transform,
        inversion_complete=descriptor is not None,
        partial_fractions=fractions,
        checks={"transform_domain_matches": sympy.cancel(transform.total - expected) == 0},
    )

    fctx = ctx.floating()
    u = solution.as_lattice_function(fctx)
    c2f, af, bf = float(c2), float(a), float(b)
    rhs = float(forcing)
    points = residual_lattice(fctx)
    residuals = []
    for x, t in points:
        lhs = (
            c2f * _d(u, (2, 0), (x, t), fctx)
            - _d(u, (0, 2), (x, t), fctx)
            - (af + bf) * _d(u, (0, 1), (x, t), fctx)
            - af * bf * u(x, t)
        )
        residuals.append(lhs - rhs * u(x, t))
    _enforce(report, residuals, len(points))
    if not report.checks["transform_domain_matches"]:
        raise ResidualError(f"telegraph derivation gave U = {transform}, not {expected}", float("inf"))
    _transform_check(report, solution, ctx, CHECK_POINT)
    return report


# ---------------------------------------------------------------------------
# wave
# ---------------------------------------------------------------------------


def solve_wave(c, f: Atom1D, g: Atom1D, ctx: QContext) -> SolutionReport:
    """
    u_tt = c^2 u_xx with u(x, 0) = f(x), D_t u(x, 0) = g(x), zero traces at x = 0.

    Business Logic:
    - U = (s L[f](r) + L[g](r)) / (s^2 - c^2 r^2)
    - the s-dependence is split into 1/(s - cr) and 1/(s + cr) partial fractions
    - inversion is attempted; a formal inverse (inversion_complete False) is a
      valid outcome, zero data gives u = 0
    """
    if c == 0:
        raise DomainError("wave equation needs c != 0")
    boundary = BoundaryData(
        x_traces={0: SExpr.zero(), 1: SExpr.zero()},
        y_traces={0: qlap1d_catalog(f, KIND.x_side, ctx), 1: qlap1d_catalog(g, KIND.x_side, ctx)},
    )
    image = _unknown()
    equation = derivative_image(KIND, "dyy", image, boundary, ctx) - derivative_image(
        KIND, "dxx", image, boundary, ctx
    ).scale(to_sympy(c) ** 2)
    transform = normalize(RSExpr.of(_solve_for_image(equation), "wave"))

    if transform.is_zero:
        descriptor, fractions = LinearCombo(()), None
    else:
        descriptor, fractions = _invert(transform.total, ctx)
        if fractions is None:
            try:
                fractions = partial_fractions_of(transform.total, S)
            except (UnsupportedMultiplicityError, DomainError):
                fractions = None
    report = SolutionReport(
        equation=EquationId.WAVE,
        descriptor=descriptor,
        transform_domain=transform,
        inversion_complete=descriptor is not None,
        partial_fractions=fractions,
    )
    if fractions is not None:
        report.checks["partial_fractions_recombine"] = sympy.cancel(fractions.total - transform.total) == 0
    if descriptor is None:
        return report

    fctx = ctx.floating()
    u = descriptor.as_lattice_function(fctx)
    c2 = float(c) ** 2
    points = residual_lattice(fctx)
    residuals = []
    for x, t in points:
        residuals.append(_d(u, (0, 2), (x, t), fctx) - c2 * _d(u, (2, 0), (x, t), fctx))
        residuals.append(u(x, 0.0) - f.evaluate(x, fctx))
        residuals.append(_d(u, (0, 1), (x, 0.0), fctx) - g.evaluate(x, fctx))
    return _enforce(report, residuals, len(points))


def solve_equation(spec: EquationSpec, ctx: QContext) -> SolutionReport:
    """Dispatch an EquationSpec to its solver."""
    if spec.id.is_functional:
        return solve_functional(spec.id, ctx)
    if spec.id is EquationId.TRANSPORT:
        return solve_transport(spec.c, spec.f, spec.g, ctx)
    if spec.id is EquationId.TELEGRAPH:
        return verify_telegraph(spec.c, spec.alpha, spec.beta, ctx)
    return solve_wave(spec.c, spec.f, spec.g, ctx)
