"""Tests for the double transforms and their operator theorems."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qcore.combinatorics import q_number
from qcore.context import QContext
from qcore.errors import CatalogMissError, DivergenceError, DomainError, IncompleteDataError
from qcore.qpoly import AdditionKind, QPoly2
from qspecial.exponential import Family, TrigSelector
from qsymbolic.rsexpr import R, S
from qtransform.descriptors import (
    Atom1D,
    ExpQAdd,
    LinearCombo,
    Monomial,
    QAddPower,
    Separable,
    SeriesQAdd,
    TrigQAdd,
    polynomial_descriptor,
)
from qtransform.double import TransformKind, qlap2d_catalog, qlap2d_numeric, scaling_image
from qtransform.operators import (
    BoundaryData,
    DerivativeSpec,
    boundary_from_descriptor,
    derivative_image,
    descriptor_polynomial,
    exponential_boundary,
    multiplication_image,
    partial_descriptor,
    partial_lattice_function,
)

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
KINDS = list(TransformKind)
MATCHED_LAW = {
    TransformKind.K1: AdditionKind.WARD_ADD,
    TransformKind.K2: AdditionKind.COADD,
    TransformKind.K3: AdditionKind.QPOW_ADD,
    TransformKind.K4: AdditionKind.QPOW_ADD,
}
RATES = st.sampled_from([Fraction(1), Fraction(-1), HALF, Fraction(-3, 2), Fraction(2, 3)])


def _monomial_sum(poly: QPoly2, kind: TransformKind, ctx: QContext) -> sympy.Expr:
    return qlap2d_catalog(polynomial_descriptor(poly), kind, ctx).total


def _differentiate(poly: QPoly2, i: int, j: int, ctx: QContext) -> QPoly2:
    terms = []
    for (a, b), c in poly.terms:
        if a < i or b < j:
            continue
        for t in range(i):
            c *= q_number(a - t, ctx)
        for t in range(j):
            c *= q_number(b - t, ctx)
        terms.append(((a - i, b - j), c))
    return QPoly2(tuple(terms))


def _same(left: sympy.Expr, right: sympy.Expr) -> bool:
    return sympy.cancel(sympy.together(left - right)) == 0


# -- kinds ------------------------------------------------------------------


def test_kind_parsing():
    assert TransformKind.of(3) is TransformKind.K3
    assert TransformKind.of("k2") is TransformKind.K2
    with pytest.raises(DomainError):
        TransformKind.of(5)


def test_kind_sides():
    assert [k.x_side.value for k in KINDS] == ["first", "second", "second", "first"]
    assert [k.y_side.value for k in KINDS] == ["first", "second", "first", "second"]


# -- catalog ----------------------------------------------------------------


def test_unit_monomial_image(exact_ctx):
    assert qlap2d_catalog(Monomial(0, 0), TransformKind.K1, exact_ctx).evaluate(2, 3) == Fraction(1, 6)


def test_product_monomial_image(exact_ctx):
    assert _same(qlap2d_catalog(Monomial(1, 1), TransformKind.K1, exact_ctx).total, 1 / (R * S) ** 2)


def test_exponential_of_q_sum_image(exact_ctx):
    image = qlap2d_catalog(ExpQAdd(HALF, QUARTER), TransformKind.K1, exact_ctx)
    assert image.evaluate(1, 1) == Fraction(8, 3)


def test_ward_square_image(exact_ctx):
    assert qlap2d_catalog(QAddPower(1, 1, 2), TransformKind.K1, exact_ctx).evaluate(2, 3) == Fraction(19, 144)


@settings(max_examples=30, deadline=None)
@seed(1)
@given(st.sampled_from(KINDS), RATES, RATES, st.integers(min_value=0, max_value=4))
def test_q_addition_power_matches_monomial_sum(kind, a, b, n):
    ctx = QContext(HALF)
    descriptor = QAddPower(a, b, n, MATCHED_LAW[kind])
    closed = qlap2d_catalog(descriptor, kind, ctx).total
    assert _same(closed, _monomial_sum(descriptor.polynomial(ctx), kind, ctx))


@pytest.mark.parametrize("law", [AdditionKind.WARD_SUB, AdditionKind.COSUB, AdditionKind.QPOW_SUB])
def test_subtraction_powers(exact_ctx, law):
    kind = {AdditionKind.WARD_SUB: TransformKind.K1, AdditionKind.COSUB: TransformKind.K2}.get(law, TransformKind.K4)
    descriptor = QAddPower(1, 2, 3, law)
    closed = qlap2d_catalog(descriptor, kind, exact_ctx).total
    assert _same(closed, _monomial_sum(descriptor.polynomial(exact_ctx), kind, exact_ctx))


def test_series_composition_image(exact_ctx):
    descriptor = SeriesQAdd((1, 2, 3), 1, 2, Family.SMALL)
    closed = qlap2d_catalog(descriptor, TransformKind.K1, exact_ctx).total
    assert _same(closed, _monomial_sum(descriptor.polynomial(exact_ctx), TransformKind.K1, exact_ctx))


def test_trig_of_q_sum_image(exact_ctx):
    image = qlap2d_catalog(TrigQAdd(1, 1, TrigSelector.COS_SMALL), TransformKind.K1, exact_ctx)
    assert _same(image.total, (R * S - 1) / ((R ** 2 + 1) * (S ** 2 + 1)))


def test_catalog_misses(exact_ctx):
    with pytest.raises(CatalogMissError):
        qlap2d_catalog(ExpQAdd(1, 1, Family.SMALL), TransformKind.K3, exact_ctx)
    with pytest.raises(CatalogMissError):
        qlap2d_catalog(QAddPower(1, 1, 2, AdditionKind.WARD_ADD), TransformKind.K2, exact_ctx)
    with pytest.raises(CatalogMissError):
        qlap2d_catalog(SeriesQAdd((1, 1), 1, 1, Family.BIG), TransformKind.K1, exact_ctx)


def test_region_is_recorded_not_enforced(exact_ctx):
    image = qlap2d_catalog(ExpQAdd(3, HALF), TransformKind.K1, exact_ctx)
    assert not image.in_region(2, 2)
    assert image.evaluate(2, 2) == Fraction(-1, 1) * Fraction(2, 3)


def test_scaling(exact_ctx):
    scaled = scaling_image(Monomial(1, 0), 2, 1, TransformKind.K1, exact_ctx)
    assert _same(scaled.total, 2 / (R ** 2 * S))
    with pytest.raises(DomainError):
        scaling_image(Monomial(1, 0), 0, 1, TransformKind.K1, exact_ctx)


# -- numeric ----------------------------------------------------------------


@pytest.mark.parametrize(
    "descriptor, kind, r, s",
    [
        (Monomial(0, 0), TransformKind.K1, 2, 3),
        (Monomial(1, HALF), TransformKind.K3, 2, 3),
        (ExpQAdd(HALF, QUARTER), TransformKind.K1, 1, 1),
        (ExpQAdd(HALF, QUARTER, Family.BIG), TransformKind.K2, 3, 3),
        (Separable(Atom1D.exp_big(HALF), Atom1D.exp_small(HALF)), TransformKind.K3, 3, 2),
        (Separable(Atom1D.exp_small(HALF), Atom1D.exp_big(HALF)), TransformKind.K4, 2, 3),
        (TrigQAdd(1, 1, TrigSelector.COS_SMALL), TransformKind.K1, 2, 2),
        (QAddPower(1, 1, 2, AdditionKind.QPOW_ADD), TransformKind.K4, 2, 3),
        (SeriesQAdd((1, 2, 3), 1, 1, Family.SMALL), TransformKind.K1, 2, 3),
    ],
)
def test_numeric_matches_catalog(exact_ctx, descriptor, kind, r, s):
    closed = float(qlap2d_catalog(descriptor, kind, exact_ctx).evaluate(r, s))
    assert_allclose(qlap2d_numeric(descriptor, r, s, kind, exact_ctx), closed, rtol=1e-8)


def test_tensor_and_factorised_paths_agree(exact_ctx):
    descriptor = ExpQAdd(HALF, QUARTER)
    factorised = qlap2d_numeric(descriptor, 2, 3, TransformKind.K1, exact_ctx)
    tensor = qlap2d_numeric(descriptor, 2, 3, TransformKind.K1, exact_ctx, factorize=False)
    assert_allclose(tensor, factorised, rtol=1e-10)


def test_divergence_names_the_axis(exact_ctx):
    with pytest.raises(DivergenceError) as excinfo:
        qlap2d_numeric(ExpQAdd(3, HALF), 2, 2, TransformKind.K1, exact_ctx)
    assert excinfo.value.axis == "x"
    with pytest.raises(DivergenceError) as excinfo:
        qlap2d_numeric(ExpQAdd(HALF, 3), 2, 2, TransformKind.K1, exact_ctx)
    assert excinfo.value.axis == "y"


def test_numeric_needs_positive_variables(exact_ctx):
    with pytest.raises(DomainError):
        qlap2d_numeric(Monomial(0, 0), 0, 1, TransformKind.K1, exact_ctx)


# -- derivative theorem -----------------------------------------------------


@pytest.mark.parametrize(
    "text, orders",
    [("dx", (1, 0)), ("dy", (0, 1)), ("dxdy", (1, 1)), ("dxx", (2, 0)), ("dyy", (0, 2)), ("dx3", (3, 0)), ("dx2dy1", (2, 1))],
)
def test_derivative_spec_parsing(text, orders):
    assert DerivativeSpec.parse(text).orders == orders


@pytest.mark.parametrize("text", ["", "dz", "dydx", "d"])
def test_derivative_spec_rejects(text):
    with pytest.raises(DomainError):
        DerivativeSpec.parse(text)


def test_mixed_derivative_of_product(exact_ctx):
    descriptor = Monomial(1, 1)
    kind = TransformKind.K1
    boundary = boundary_from_descriptor(descriptor, kind, exact_ctx)
    image = qlap2d_catalog(descriptor, kind, exact_ctx)
    assert _same(derivative_image(kind, "dxdy", image, boundary, exact_ctx).total, 1 / (R * S))


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("spec", ["dx", "dy", "dxdy", "dxx", "dyy", "dx2dy1", "dy3"])
def test_derivative_image_matches_differentiated_polynomial(exact_ctx, kind, spec):
    descriptor = LinearCombo(((1, QAddPower(1, 2, 3, AdditionKind.WARD_ADD)), (3, Monomial(0, 2)), (-1, Monomial(2, 0))))
    poly = descriptor_polynomial(descriptor, exact_ctx)
    boundary = boundary_from_descriptor(descriptor, kind, exact_ctx)
    image = qlap2d_catalog(polynomial_descriptor(poly), kind, exact_ctx)
    i, j = DerivativeSpec.parse(spec).orders
    derived = derivative_image(kind, spec, image, boundary, exact_ctx)
    assert _same(derived.total, _monomial_sum(_differentiate(poly, i, j, exact_ctx), kind, exact_ctx))


def test_derivative_image_needs_boundary_data(exact_ctx):
    image = qlap2d_catalog(Monomial(1, 1), TransformKind.K1, exact_ctx)
    with pytest.raises(IncompleteDataError):
        derivative_image(TransformKind.K1, "dx", image, BoundaryData(), exact_ctx)


def test_boundary_data_of_polynomial(exact_ctx):
    boundary = boundary_from_descriptor(QAddPower(1, 1, 2), TransformKind.K1, exact_ctx)
    # (x ⊕_q y)^2 at the corner: D_x D_y gives [2]_q
    assert boundary.corner_value(1, 1) == Fraction(3, 2)
    assert boundary.corner_value(0, 0) == 0
    assert _same(boundary.x_trace(0).total, Fraction(3, 2) / S ** 3)


def test_non_polynomial_descriptor_has_no_automatic_boundary(exact_ctx):
    with pytest.raises(DomainError):
        descriptor_polynomial(ExpQAdd(1, 1), exact_ctx)


def test_partial_lattice_function(float_ctx):
    derivative = partial_lattice_function(Monomial(2, 1), "dxdy", float_ctx)
    assert_allclose(derivative(2.0, 3.0), 3.0)


@pytest.mark.parametrize("i, j", [(0, 1), (1, 0), (2, 1), (3, 0), (0, 3), (3, 3)])
def test_polynomial_q_derivative_matches_term_by_term(exact_ctx, i, j):
    poly = descriptor_polynomial(QAddPower(1, 2, 3, AdditionKind.WARD_ADD), exact_ctx) + QPoly2.monomial(0, 2, 3)
    assert poly.q_derivative(i, j, exact_ctx) == _differentiate(poly, i, j, exact_ctx)


def test_monomial_q_derivative_is_exact(exact_ctx):
    # D_x^2 x^3 y^2 = [3]_q [2]_q x y^2
    assert QPoly2.monomial(3, 2).q_derivative(2, 0, exact_ctx) == QPoly2.monomial(1, 2, Fraction(21, 8))
    assert QPoly2.monomial(3, 2).q_derivative(0, 3, exact_ctx).is_zero


def test_partial_descriptor_of_polynomial(exact_ctx):
    differentiated = partial_descriptor(Monomial(3, 2), "dxx", exact_ctx)
    assert differentiated == LinearCombo(((Fraction(21, 8), Monomial(1, 2)),))
    assert partial_descriptor(Monomial(3, 2), "dy3", exact_ctx) == LinearCombo(())


def test_partial_descriptor_of_exponentials(exact_ctx):
    small = ExpQAdd(HALF, QUARTER, Family.SMALL)
    assert partial_descriptor(small, "dx2dy1", exact_ctx) == LinearCombo(((Fraction(1, 16), small),))
    big = ExpQAdd(HALF, QUARTER, Family.BIG)
    # D_x^2 E_q(ax) = a^2 q E_q(a q^2 x)
    expected = LinearCombo(((Fraction(1, 8) * Fraction(1, 4), ExpQAdd(Fraction(1, 8), Fraction(1, 8), Family.BIG)),))
    assert partial_descriptor(big, "dx2dy1", exact_ctx) == expected


def test_partial_descriptor_matches_lattice_quotients(float_ctx, exact_ctx):
    descriptor = ExpQAdd(HALF, QUARTER, Family.BIG)
    closed = partial_descriptor(descriptor, "dxdy", exact_ctx)
    lattice = partial_lattice_function(descriptor, "dxdy", float_ctx)
    assert_allclose(closed.evaluate(1.5, 2.0, float_ctx), lattice(1.5, 2.0), rtol=1e-10)


def test_partial_descriptor_rejects_other_families(exact_ctx):
    with pytest.raises(DomainError):
        partial_descriptor(TrigQAdd(1, 1, TrigSelector.COS_SMALL), "dx", exact_ctx)


@pytest.mark.parametrize(
    "descriptor",
    [QAddPower(1, 1, 3, AdditionKind.WARD_ADD), Monomial(3, 2), ExpQAdd(QUARTER, HALF)],
    ids=["ward_cube", "x3y2", "exp"],
)
@pytest.mark.parametrize("spec", ["dxx", "dx3", "dy3", "dx2dy1"])
def test_high_order_derivative_theorem_two_paths(exact_ctx, descriptor, spec):
    kind = TransformKind.K1
    if isinstance(descriptor, ExpQAdd):
        boundary = exponential_boundary(QUARTER, HALF, kind, exact_ctx)
    else:
        boundary = boundary_from_descriptor(descriptor, kind, exact_ctx)
    image = qlap2d_catalog(descriptor, kind, exact_ctx)
    derived = derivative_image(kind, spec, image, boundary, exact_ctx)
    numeric = qlap2d_numeric(partial_descriptor(descriptor, spec, exact_ctx), 2, 3, kind, exact_ctx)
    assert_allclose(numeric, float(derived.evaluate(Fraction(2), Fraction(3))), rtol=1e-8, atol=1e-14)


# -- multiplication theorem -------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("m, n", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (0, 2)])
def test_multiplication_image_is_exact(exact_ctx, kind, m, n):
    image = qlap2d_catalog(Monomial(1, 1), kind, exact_ctx)
    evaluator = multiplication_image(kind, m, n, image, exact_ctx)
    expected = qlap2d_catalog(Monomial(1 + m, 1 + n), kind, exact_ctx).evaluate(2, 3)
    assert evaluator(Fraction(2), Fraction(3)) == expected


def test_multiplication_image_in_float(exact_ctx):
    image = qlap2d_catalog(ExpQAdd(HALF, QUARTER), TransformKind.K1, exact_ctx)
    evaluator = multiplication_image(TransformKind.K1, 1, 0, image, exact_ctx)
    # x e_q(ax) has first-kind image 1/((r-a)(r-aq))
    assert_allclose(evaluator(2.0, 3.0), 1 / (1.5 * 1.75 * 2.75), rtol=1e-9)


def test_multiplication_rejects_negative_powers(exact_ctx):
    with pytest.raises(DomainError):
        multiplication_image(TransformKind.K1, -1, 0, qlap2d_catalog(Monomial(0, 0), TransformKind.K1, exact_ctx), exact_ctx)


def test_moments_match_shifted_monomial(exact_ctx):
    expected = float(qlap2d_catalog(Monomial(2, 3), TransformKind.K2, exact_ctx).evaluate(2, 3))
    value = qlap2d_numeric(Monomial(1, 1), 2, 3, TransformKind.K2, exact_ctx, moments=(1, 2))
    assert_allclose(value, expected, rtol=1e-8)


def test_moments_on_tensor_and_factorised_paths_agree(exact_ctx):
    descriptor = ExpQAdd(HALF, QUARTER)
    factorised = qlap2d_numeric(descriptor, 2, 3, TransformKind.K1, exact_ctx, moments=(2, 1))
    tensor = qlap2d_numeric(descriptor, 2, 3, TransformKind.K1, exact_ctx, factorize=False, moments=(2, 1))
    assert_allclose(tensor, factorised, rtol=1e-10)


def test_negative_moments_rejected(exact_ctx):
    with pytest.raises(DomainError):
        qlap2d_numeric(Monomial(0, 0), 2, 3, TransformKind.K1, exact_ctx, moments=(-1, 0))


@pytest.mark.parametrize("m, n", [(0, 1), (1, 0), (2, 2)])
def test_multiplication_theorem_for_growing_exponential(exact_ctx, m, n):
    descriptor = ExpQAdd(Fraction(1, 10), Fraction(1, 5), Family.BIG)
    image = qlap2d_catalog(descriptor, TransformKind.K2, exact_ctx)
    evaluator = multiplication_image(TransformKind.K2, m, n, image, exact_ctx)
    numeric = qlap2d_numeric(descriptor, 2, 3, TransformKind.K2, exact_ctx, moments=(m, n))
    assert_allclose(numeric, float(evaluator(Fraction(2), Fraction(3))), rtol=1e-8)


def test_multiplication_theorem_from_numeric_image(exact_ctx):
    descriptor = Separable(Atom1D.exp_small(-1), Atom1D.exp_small(-1))
    kind = TransformKind.K2
    evaluator = multiplication_image(
        kind, 1, 1, lambda r, s: qlap2d_numeric(descriptor, r, s, kind, exact_ctx), exact_ctx
    )
    numeric = qlap2d_numeric(descriptor, 2.0, 3.0, kind, exact_ctx, moments=(1, 1))
    assert_allclose(numeric, evaluator(2.0, 3.0), rtol=1e-8)
