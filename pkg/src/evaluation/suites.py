"""
Verification suites: exact identities, catalog-vs-numeric transform tables and
operator-theorem closure. Each suite returns report rows grouped by stage.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Tuple

import mpmath
import numpy as np

import config

from evaluation.report import error_record, flag_record, make_record
from qcore.combinatorics import (
    INFINITY,
    binom2,
    evaluate_polynomial,
    gaussian_polynomial,
    q_factorial,
    q_number,
    q_pochhammer,
)
from qcore.context import QContext
from qcore.errors import CatalogMissError, DivergenceError, QLabError
from qcore.qpoly import AdditionKind, QPoly2, expand_q_addition, factor_product, series_q_compose, series_weight
from qspecial.exponential import (
    Family,
    TrigSelector,
    exp_series_coefficients,
    q_exp_big,
    q_exp_big_series,
    q_exp_small,
    q_exp_small_series,
)
from qspecial.gamma import q_gamma_first, q_gamma_first_integral, q_gamma_second
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
from qtransform.double import TransformKind, qlap2d_catalog, qlap2d_numeric
from qtransform.operators import (
    BoundaryData,
    boundary_from_descriptor,
    derivative_image,
    exponential_boundary,
    multiplication_image,
    partial_descriptor,
)
from qtransform.single import Side, default_plan, qlap1d_numeric

SUITES = ("identities", "transforms", "derivatives", "all")

IDENTITY_Q_GRID = ("1/2", "2/3")
TRANSFORM_Q_GRID = ("3/10", "1/2", "7/10")
RS_GRID = (0.8, 1.0, 2.0)

IDENTITY_DEGREE = 12
POWER_LIMIT = 8
FLOAT_IDENTITY_TOL = 1e-12
TRANSFORM_TOL = 1e-8
WORKED_EXAMPLE_TOL = 1e-11
OPERATOR_TOL = 1e-8
GAMMA_TOL = 1e-10
RECURRENCE_TOL = 1e-9

Rows = List[Dict]


def q_label(ctx: QContext) -> str:
    return str(ctx.q) if ctx.is_exact else repr(ctx.q)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def _poly_residual(left: QPoly2, right: QPoly2):
    """Largest coefficient of left - right, relative to the largest of right in float mode."""
    residual = (left - right).max_abs_coefficient()
    if isinstance(residual, Fraction) or residual == 0:
        return residual
    return float(residual) / max(1.0, float(right.max_abs_coefficient()))


def _poly_row(op: str, params: Dict, left: QPoly2, right: QPoly2, ctx: QContext) -> Dict:
    residual = _poly_residual(left, right)
    zero = Fraction(0) if isinstance(residual, Fraction) else 0.0
    return make_record(op, None, q_label(ctx), params, residual, zero, FLOAT_IDENTITY_TOL)


def q_power_rows(ctx: QContext) -> Rows:
    """(x ⊕ y)_q^n and its signed variant against the literal factor products."""
    rows = []
    for n in range(POWER_LIMIT + 1):
        for law, subtract in ((AdditionKind.QPOW_ADD, False), (AdditionKind.QPOW_SUB, True)):
            rows.append(_poly_row(
                "qpow_vs_factor_product",
                {"n": n, "law": law.value},
                expand_q_addition(law, n, ctx),
                factor_product(n, ctx, subtract=subtract),
                ctx,
            ))
    return rows


def addition_law_rows(ctx: QContext) -> Rows:
    """
    The four q-addition expansions against their definitions.

    Business Logic:
    - Ward coefficients against the q-Pascal Gaussian polynomials evaluated at q
    - coaddition against the Ward coefficients times q^(k(k-n))
    - subtraction laws against the addition law with y replaced by -y
    """
    rows = []
    q = ctx.q
    for n in range(POWER_LIMIT + 1):
        pascal = QPoly2(tuple(
            ((k, n - k), evaluate_polynomial(gaussian_polynomial(n, k), q)) for k in range(n + 1)
        ))
        ward = expand_q_addition(AdditionKind.WARD_ADD, n, ctx)
        rows.append(_poly_row("ward_vs_q_pascal", {"n": n}, ward, pascal, ctx))

        coadd_reference = QPoly2(tuple(
            ((k, n - k), ward.coefficient(k, n - k) * ctx.power(k * (k - n))) for k in range(n + 1)
        ))
        rows.append(_poly_row(
            "coadd_vs_definition", {"n": n}, expand_q_addition(AdditionKind.COADD, n, ctx), coadd_reference, ctx
        ))

        minus_one = ctx.coerce(-1)
        for law in (AdditionKind.WARD_SUB, AdditionKind.COSUB, AdditionKind.QPOW_SUB):
            rows.append(_poly_row(
                "subtraction_vs_signed_addition",
                {"n": n, "law": law.value},
                expand_q_addition(law, n, ctx),
                expand_q_addition(law.addition, n, ctx).substitute_scaled(ctx.coerce(1), minus_one),
                ctx,
            ))
    return rows


def _law_of(family: Family) -> AdditionKind:
    return AdditionKind.WARD_ADD if family is Family.SMALL else AdditionKind.COADD


def _compose(series: List, family: Family, ctx: QContext) -> QPoly2:
    """f(x ∘ y) to IDENTITY_DEGREE, for f with Taylor coefficients series."""
    law = _law_of(family)
    a = [b / series_weight(n, law, ctx) for n, b in enumerate(series)]
    return series_q_compose(a, law, 1, 1, ctx).truncate(IDENTITY_DEGREE)


def random_rates(seed: int, count: int = 2) -> List[Fraction]:
    """Small nonzero rationals drawn deterministically from seed."""
    rng = np.random.default_rng(seed)
    rates = []
    while len(rates) < count:
        numerator = int(rng.integers(-9, 10))
        if numerator:
            rates.append(Fraction(numerator, int(rng.integers(1, 10))))
    return rates


def homomorphism_rows(ctx: QContext, seed: int = config.DEFAULT_SEED) -> Rows:
    """
    e_q(a(x ⊕_q y)) = e_q(ax) e_q(ay) and E_q(a(x ⊞_q y)) = E_q(ax) E_q(ay), coefficient-wise,
    for a = 1, -2/3 and two rates drawn from seed.
    """
    rows = []
    for family in (Family.SMALL, Family.BIG):
        for rate in [1, Fraction(-2, 3)] + random_rates(seed):
            series = exp_series_coefficients(rate, family, IDENTITY_DEGREE, ctx)
            product = (QPoly2.univariate(series, "x") * QPoly2.univariate(series, "y")).truncate(IDENTITY_DEGREE)
            rows.append(_poly_row(
                "exp_homomorphism",
                {"family": family.value, "rate": str(rate), "degree": IDENTITY_DEGREE},
                _compose(series, family, ctx),
                product,
                ctx,
            ))
    return rows


def trig_addition_rows(ctx: QContext) -> Rows:
    """q-trigonometric and q-hyperbolic addition formulas, coefficient-wise."""
    rows = []
    for selector in TrigSelector:
        atom = Atom1D.trig(selector, 1)
        series = atom.series_coefficients(IDENTITY_DEGREE, ctx)
        expected = QPoly2()
        for sign, g, h in TrigQAdd(1, 1, selector).expansion():
            gx = QPoly2.univariate(g.series_coefficients(IDENTITY_DEGREE, ctx), "x")
            hy = QPoly2.univariate(h.series_coefficients(IDENTITY_DEGREE, ctx), "y")
            expected = expected + (gx * hy) * ctx.coerce(sign)
        rows.append(_poly_row(
            "trig_addition_formula",
            {"selector": selector.value, "degree": IDENTITY_DEGREE},
            _compose(series, selector.family, ctx),
            expected.truncate(IDENTITY_DEGREE),
            ctx,
        ))
    return rows


def exponential_rows(ctx: QContext) -> Rows:
    """Float checks: e_q(z) E_q(-z) = 1, product against series forms, (a; q)_inf against mpmath."""
    fctx = ctx.floating()
    q = fctx.q_float
    label = q_label(ctx)
    rows = []
    for z in (-0.5, 0.1, 0.3, 1.2):
        rows.append(make_record(
            "exp_reciprocity", None, label, {"z": z},
            q_exp_small(z, fctx) * q_exp_big(-z, fctx), 1.0, FLOAT_IDENTITY_TOL,
        ))
        if abs(z) * (1.0 - q) < 0.5:
            rows.append(make_record(
                "e_q_product_vs_series", None, label, {"z": z},
                q_exp_small(z, fctx), q_exp_small_series(z, fctx), FLOAT_IDENTITY_TOL,
            ))
        rows.append(make_record(
            "E_q_product_vs_series", None, label, {"z": z},
            q_exp_big(z, fctx), q_exp_big_series(z, fctx), FLOAT_IDENTITY_TOL,
        ))
    for a in (0.25, -0.5, q):
        rows.append(make_record(
            "pochhammer_infinite_vs_mpmath", None, label, {"a": a},
            q_pochhammer(a, INFINITY, fctx), float(mpmath.qp(a, q)), FLOAT_IDENTITY_TOL,
        ))
    return rows


def gamma_rows(ctx: QContext) -> Rows:
    """
    q-Gamma checks.

    Business Logic:
    - Gamma_q(n+1) = [n]_q! (exact in exact mode) and against the lattice integral
    - gamma_q(n) = q^(-binom(n, 2)) Gamma_q(n) with mpmath's Gamma_q as oracle
    - both recurrences at t = 0.5, 1.5, 2.5, and product against integral Gamma_q
    """
    fctx = ctx.floating()
    q = fctx.q_float
    label = q_label(ctx)
    rows = []
    for n in range(11):
        rows.append(make_record(
            "gamma_first_factorial", None, label, {"n": n},
            q_gamma_first(n + 1, ctx), q_factorial(n, ctx), GAMMA_TOL,
        ))
    for n in range(1, 9):
        rows.append(make_record(
            "gamma_second_vs_first", None, label, {"n": n},
            float(q_gamma_second(n, ctx)), q ** (-binom2(n)) * float(mpmath.qgamma(n, q)), GAMMA_TOL,
        ))
    for t in (0.5, 1.5, 2.5):
        rows.append(make_record(
            "gamma_first_recurrence", None, label, {"t": t},
            q_gamma_first(t + 1, fctx), q_number(t, fctx) * q_gamma_first(t, fctx), RECURRENCE_TOL,
        ))
        rows.append(make_record(
            "gamma_second_recurrence", None, label, {"t": t},
            q_gamma_second(t + 1, fctx), q ** (-t) * q_number(t, fctx) * q_gamma_second(t, fctx), RECURRENCE_TOL,
        ))
        rows.append(make_record(
            "gamma_product_vs_integral", None, label, {"t": t},
            q_gamma_first(t, fctx), q_gamma_first_integral(t, fctx), GAMMA_TOL,
        ))
        rows.append(make_record(
            "gamma_product_vs_mpmath", None, label, {"t": t},
            q_gamma_first(t, fctx), float(mpmath.qgamma(t, q)), GAMMA_TOL,
        ))
    return rows


def identity_stage(ctx: QContext, seed: int = config.DEFAULT_SEED) -> Rows:
    rows = q_power_rows(ctx) + addition_law_rows(ctx) + homomorphism_rows(ctx, seed) + trig_addition_rows(ctx)
    rows.extend(exponential_rows(ctx))
    rows.extend(gamma_rows(ctx))
    return rows


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)
_TENTH = Fraction(1, 10)
_FIFTH = Fraction(1, 5)

# sign pairs of (a, b) as multiples of min(r, s) / 4
PARAMETER_SIGNS = ((1, 1), (-1, -1), (1, 0), (0, -1))
PARAMETER_SIGNS_FULL = tuple((i, j) for i in (1, 0, -1) for j in (1, 0, -1))
SUBTRACTION_SIGNS = ((1, 1), (-1, 1))

_SUBTRACTION_LAW = {
    AdditionKind.WARD_ADD: AdditionKind.WARD_SUB,
    AdditionKind.COADD: AdditionKind.COSUB,
    AdditionKind.QPOW_ADD: AdditionKind.QPOW_SUB,
}

Case = Tuple[str, Descriptor, float, Dict]


def parameter_magnitude(r: float, s: float) -> Fraction:
    """min(r, s) / 4 as an exact rational."""
    return Fraction(str(min(r, s))) / 4


def _fixed_cases(kind: TransformKind, full: bool) -> List[Case]:
    powers = range(5) if full else (0, 2, 4)
    cases: List[Case] = []
    if kind is TransformKind.K1:
        cases.append(("1", Monomial(0, 0), WORKED_EXAMPLE_TOL, {}))
        cases.append(("xy", Monomial(1, 1), WORKED_EXAMPLE_TOL, {}))
        cases.append(("1+4xy", LinearCombo(((1, Monomial(0, 0)), (4, Monomial(1, 1)))), TRANSFORM_TOL, {}))
        cases.extend((f"x^{n}y^{m}", Monomial(n, m), TRANSFORM_TOL, {}) for n in powers for m in powers)
        for alpha in (_HALF, -_HALF):
            for beta in (_HALF, -_HALF):
                cases.append((f"x^{alpha}y^{beta}", Monomial(alpha, beta), TRANSFORM_TOL, {}))
    elif kind is TransformKind.K2:
        cases.append(("1", Monomial(0, 0), TRANSFORM_TOL, {}))
        cases.extend((f"x^{n}y^{m}", Monomial(n, m), TRANSFORM_TOL, {}) for n in (0, 1, 2) for m in (1, 2))
    elif kind is TransformKind.K3:
        cases.append(("xy", Monomial(1, 1), TRANSFORM_TOL, {}))
    else:
        cases.append(("x^2y", Monomial(2, 1), TRANSFORM_TOL, {}))
    return cases


def _parameter_cases(kind: TransformKind, a: Fraction, b: Fraction) -> List[Case]:
    """Rows whose rates (a, b) come from the grid point."""
    params = {"a": str(a), "b": str(b)}
    law = {
        TransformKind.K1: AdditionKind.WARD_ADD,
        TransformKind.K2: AdditionKind.COADD,
    }.get(kind, AdditionKind.QPOW_ADD)
    power = "(ax+by)^{}" if kind in (TransformKind.K1, TransformKind.K2) else "(ax+by)_q^{}"
    cases: List[Case] = [
        (power.format(n), QAddPower(a, b, n, law), TRANSFORM_TOL, {**params, "law": law.value}) for n in range(4)
    ]
    if kind is TransformKind.K1:
        cases.append(("e_q(ax+by)", ExpQAdd(a, b, Family.SMALL), TRANSFORM_TOL, params))
        for name in ("cos", "sin", "cosh", "sinh"):
            selector = TrigSelector.of(name, Family.SMALL)
            cases.append((f"{name}_q(ax+by)", TrigQAdd(a, b, selector), TRANSFORM_TOL, params))
        cases.append(("series", SeriesQAdd((1, 0, 2, 1), a, b, Family.SMALL), TRANSFORM_TOL, params))
    elif kind is TransformKind.K2:
        cases.append(("E_q(ax+by)", ExpQAdd(a, b, Family.BIG), TRANSFORM_TOL, params))
        for name in ("cos", "sin", "cosh", "sinh"):
            selector = TrigSelector.of(name, Family.BIG)
            cases.append((f"{name}_Q(ax+by)", TrigQAdd(a, b, selector), TRANSFORM_TOL, params))
        cases.append(("series", SeriesQAdd((1, 1, 1), a, b, Family.BIG), TRANSFORM_TOL, params))
    elif kind is TransformKind.K3:
        cases.append(("E_q(ax)e_q(by)", Separable(Atom1D.exp_big(a), Atom1D.exp_small(b)), TRANSFORM_TOL, params))
    else:
        cases.append(("e_q(ax)E_q(by)", Separable(Atom1D.exp_small(a), Atom1D.exp_big(b)), TRANSFORM_TOL, params))
    return cases


def _subtraction_cases(kind: TransformKind, a: Fraction, b: Fraction) -> List[Case]:
    law = _SUBTRACTION_LAW[{
        TransformKind.K1: AdditionKind.WARD_ADD,
        TransformKind.K2: AdditionKind.COADD,
    }.get(kind, AdditionKind.QPOW_ADD)]
    params = {"a": str(a), "b": str(b), "law": law.value}
    return [(f"(ax-by)^{n}", QAddPower(a, b, n, law), TRANSFORM_TOL, params) for n in range(1, 4)]


def catalog_cases(kind: TransformKind, r: float, s: float, full: bool = False) -> List[Case]:
    """
    (label, descriptor, tolerance, extra params) rows of one kind's table at the
    grid point (r, s). Rates a, b range over {0, ±min(r, s)/4}.
    """
    kind = TransformKind.of(kind)
    p = parameter_magnitude(r, s)
    cases = _fixed_cases(kind, full)
    for i, j in PARAMETER_SIGNS_FULL if full else PARAMETER_SIGNS:
        cases.extend(_parameter_cases(kind, i * p, j * p))
    for i, j in SUBTRACTION_SIGNS:
        cases.extend(_subtraction_cases(kind, i * p, j * p))
    return cases


def _guarded(op: str, kind, ctx: QContext, params: Dict, compute: Callable[[], Dict]) -> Dict:
    try:
        return compute()
    except QLabError as exc:
        return error_record(op, kind, q_label(ctx), params, exc)


def transform_rows(kind: TransformKind, ctx: QContext, full: bool = False) -> Rows:
    """
    Numeric lattice sums against the catalog on the (r, s) grid.

    Grid points outside a closed form's region are skipped, not failed. Images
    are cached per (descriptor, kind, q), so repeated rates share one derivation.
    The catalog side is evaluated exactly at the grid point, so vanishing images
    compare as zeros.
    """
    kind = TransformKind.of(kind)
    exact = ctx.exact()
    rows = []
    for r in RS_GRID:
        for s in RS_GRID:
            for label, descriptor, tol, extra in catalog_cases(kind, r, s, full):
                image = qlap2d_catalog(descriptor, kind, exact)
                if not image.in_region(r, s):
                    continue
                params = {"f": label, **extra, "r": r, "s": s}
                rows.append(_guarded("transform", kind.value, ctx, params, lambda: make_record(
                    "transform", kind.value, q_label(ctx), params,
                    qlap2d_numeric(descriptor, r, s, kind, exact),
                    float(image.evaluate(Fraction(str(r)), Fraction(str(s)))),
                    tol,
                )))
    return rows


def printed_power_form(kind: TransformKind, a: float, b: float, n: int, r: float, s: float, q: float) -> float:
    """The third- and fourth-kind q-power-basis formulas in their originally printed form."""
    qf = float(mpmath.qfac(n, q))
    if TransformKind.of(kind) is TransformKind.K3:
        return qf * q ** (-binom2(n + 1)) / (a * s - b * r * q ** n) * (
            (a / s) ** (n + 1) - (b * q ** n / r) ** (n + 1)
        )
    return qf / (b * r - q * s * a) * ((b / s) ** (n + 1) - (q * a / r) ** (n + 1))


def printed_form_rows(ctx: QContext) -> Rows:
    """
    Informational rows: the printed K3/K4 power formulas against numerics.
    The catalog carries the forms re-derived from the monomial images.
    """
    exact = ctx.exact()
    q = exact.q_float
    a, b = float(_QUARTER), float(_TENTH)
    rows = []
    for kind in (TransformKind.K3, TransformKind.K4):
        for n in range(4):
            descriptor = QAddPower(_QUARTER, _TENTH, n, AdditionKind.QPOW_ADD)
            r, s = 2.0, 1.0
            params = {"f": f"(ax+by)_q^{n}", "a": a, "b": b, "r": r, "s": s, "form": "printed"}
            rows.append(_guarded("printed_power_form", kind.value, ctx, params, lambda: make_record(
                "printed_power_form", kind.value, q_label(ctx), params,
                qlap2d_numeric(descriptor, r, s, kind, exact),
                printed_power_form(kind, a, b, n, r, s, q),
                TRANSFORM_TOL,
                informational=True,
            )))
    return rows


def divergence_rows(ctx: QContext) -> Rows:
    """The naive A = 1 lattice for the first-kind kernel with f = 1 must report a large-x divergence."""
    fctx = ctx.floating()
    s = 1.3
    plan = default_plan(Side.FIRST, s, fctx, scale=1.0, k_min=-4000)
    params = {"f": "1", "s": s, "scale": 1.0}
    try:
        qlap1d_numeric(Atom1D.constant(1), s, Side.FIRST, fctx, plan=plan)
        observed = "converged"
    except DivergenceError as exc:
        observed = f"divergence:{exc.tail}"
    except QLabError as exc:
        observed = type(exc).__name__
    return [flag_record("naive_lattice_divergence", "K1", q_label(ctx), params, observed, "divergence:large-x")]


def transform_stage(ctx: QContext, full: bool = False) -> Rows:
    rows = []
    for kind in TransformKind:
        rows.extend(transform_rows(kind, ctx, full))
    rows.extend(printed_form_rows(ctx))
    rows.extend(divergence_rows(ctx))
    return rows


# ---------------------------------------------------------------------------
# operator theorems
# ---------------------------------------------------------------------------

DERIVATIVE_SPECS = ("dx", "dy", "dxdy", "dxx", "dyy", "dx3", "dy3", "dx2dy1")
OPERATOR_POINTS = ((2.0, 3.0), (1.5, 2.5))


def _polynomial_cases(kind: TransformKind) -> List[Tuple[str, Descriptor]]:
    law = {
        TransformKind.K1: AdditionKind.WARD_ADD,
        TransformKind.K2: AdditionKind.COADD,
    }.get(kind, AdditionKind.QPOW_ADD)
    return [
        ("x^3y^2", Monomial(3, 2)),
        ("(x+y)^3", QAddPower(1, 1, 3, law)),
    ]


def _derivative_cases(kind: TransformKind, ctx: QContext) -> Iterable[Tuple[str, Descriptor, BoundaryData]]:
    for label, descriptor in _polynomial_cases(kind):
        yield label, descriptor, boundary_from_descriptor(descriptor, kind, ctx)
    if kind is TransformKind.K1:
        yield "e_q(ax+by)", ExpQAdd(_QUARTER, _HALF, Family.SMALL), exponential_boundary(_QUARTER, _HALF, kind, ctx)


def derivative_rows(ctx: QContext) -> Rows:
    """
    Two-path agreement for the derivative theorems.

    Path one: derivative_image from the catalog image and exact boundary data,
    evaluated exactly at the grid point.
    Path two: numeric transform of the exactly differentiated function.
    """
    exact = ctx.exact()
    rows = []
    for kind in TransformKind:
        for label, descriptor, boundary in _derivative_cases(kind, exact):
            image = qlap2d_catalog(descriptor, kind, exact)
            for spec in DERIVATIVE_SPECS:
                derived = derivative_image(kind, spec, image, boundary, exact)
                differentiated = partial_descriptor(descriptor, spec, exact)
                for r, s in OPERATOR_POINTS:
                    params = {"f": label, "derivative": spec, "r": r, "s": s}
                    rows.append(_guarded("derivative_theorem", kind.value, ctx, params, lambda: make_record(
                        "derivative_theorem", kind.value, q_label(ctx), params,
                        qlap2d_numeric(differentiated, r, s, kind, exact),
                        float(derived.evaluate(Fraction(r), Fraction(s))),
                        OPERATOR_TOL,
                    )))
    return rows


def multiplication_cases(kind: TransformKind) -> List[Tuple[str, Descriptor]]:
    """f = 1, xy and e_q(-x) e_q(-y), plus a positive-rate exponential of the kind's own family."""
    kind = TransformKind.of(kind)
    cases = [
        ("1", Monomial(0, 0)),
        ("xy", Monomial(1, 1)),
        ("e_q(-x)e_q(-y)", Separable(Atom1D.exp_small(-1), Atom1D.exp_small(-1))),
    ]
    if kind is TransformKind.K1:
        cases.append(("e_q(ax+by)", ExpQAdd(_QUARTER, _HALF, Family.SMALL)))
    elif kind is TransformKind.K2:
        cases.append(("E_q(ax+by)", ExpQAdd(_TENTH, _FIFTH, Family.BIG)))
    return cases


def _multiplication_source(descriptor: Descriptor, kind: TransformKind, ctx: QContext):
    """
    The transform F the theorem differentiates, with the point type it takes.

    Catalog images are evaluated exactly; functions without a closed form under
    the kind (e_q atoms under the second kind) fall back to the numeric transform.
    """
    try:
        return qlap2d_catalog(descriptor, kind, ctx), Fraction
    except CatalogMissError:
        return (lambda r, s: qlap2d_numeric(descriptor, r, s, kind, ctx)), float


def multiplication_rows(ctx: QContext) -> Rows:
    """
    Two-path agreement for the multiplication theorems of K1 and K2, m, n <= 2.

    The theorem side differentiates the image in r and s; the numeric side sums
    x^m y^n f directly on the kernel lattices.
    """
    exact = ctx.exact()
    rows = []
    for kind in (TransformKind.K1, TransformKind.K2):
        for label, descriptor in multiplication_cases(kind):
            image, point = _multiplication_source(descriptor, kind, exact)
            for m in range(3):
                for n in range(3):
                    if m == n == 0:
                        continue
                    evaluator = multiplication_image(kind, m, n, image, exact)
                    for r, s in OPERATOR_POINTS:
                        params = {"f": label, "m": m, "n": n, "r": r, "s": s}
                        rows.append(_guarded("multiplication_theorem", kind.value, ctx, params, lambda: make_record(
                            "multiplication_theorem", kind.value, q_label(ctx), params,
                            qlap2d_numeric(descriptor, r, s, kind, exact, moments=(m, n)),
                            float(evaluator(point(r), point(s))),
                            OPERATOR_TOL,
                        )))
    return rows


def derivative_stage(ctx: QContext) -> Rows:
    return derivative_rows(ctx) + multiplication_rows(ctx)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _contexts(grid: Tuple[str, ...], ctx: QContext, full: bool) -> List[QContext]:
    if not full:
        return [ctx]
    return [QContext.from_text(text, ctx.mode.value, default_tol=ctx.default_tol, max_terms=ctx.max_terms) for text in grid]


def run_suite(name: str, ctx: QContext, full: bool = False, seed: int = config.DEFAULT_SEED) -> Dict[str, Rows]:
    """
    Run a named suite and return its rows by stage.

    Args:
        name: identities, transforms, derivatives or all
        ctx: Configured q and numeric policy
        full: Run the whole q grid instead of ctx's q only
        seed: Seed of the randomized identity rates

    Raises:
        ValueError: unknown suite name
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    stages: Dict[str, Rows] = {}
    if name in ("identities", "all"):
        stages["identities"] = [row for c in _contexts(IDENTITY_Q_GRID, ctx, full) for row in identity_stage(c, seed)]
    if name in ("transforms", "all"):
        stages["transforms"] = [row for c in _contexts(TRANSFORM_Q_GRID, ctx, full) for row in transform_stage(c, full)]
    if name in ("derivatives", "all"):
        stages["derivatives"] = derivative_stage(ctx)
    return stages
