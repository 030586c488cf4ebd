"""Tests for qcore: context, q-numbers, Pochhammer symbols and q-addition polynomials."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qcore.combinatorics import (
    INFINITY,
    binom2,
    evaluate_polynomial,
    gaussian_polynomial,
    q_binomial,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_at_power,
    q_pochhammer_index_array,
)
from qcore.context import QContext, ScalarMode
from qcore.errors import DomainError, UnsupportedExactInputError
from qcore.qpoly import AdditionKind, QPoly2, expand_q_addition, factor_product, series_q_compose

Q_VALUES = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=50)
SMALL_N = st.integers(min_value=0, max_value=10)


# -- QContext ---------------------------------------------------------------


def test_context_parses_text_exactly():
    ctx = QContext.from_text("1/2")
    assert ctx.q == Fraction(1, 2)
    assert ctx.is_exact


@pytest.mark.parametrize("q", [0, 1, Fraction(3, 2), -Fraction(1, 2)])
def test_context_rejects_q_outside_unit_interval(q):
    with pytest.raises(DomainError):
        QContext(q)


def test_context_rejects_binary_float_in_exact_mode():
    with pytest.raises(UnsupportedExactInputError):
        QContext(0.5, ScalarMode.EXACT)


def test_context_switches_between_modes():
    ctx = QContext(Fraction(3, 10))
    assert ctx.floating().q == 0.3
    assert ctx.floating().exact().q == Fraction(3, 10)


def test_power_is_exact_for_integer_exponents(exact_ctx):
    assert exact_ctx.power(-3) == 8
    with pytest.raises(UnsupportedExactInputError):
        exact_ctx.power(0.5)


# -- q-numbers --------------------------------------------------------------


def test_q_factorial_of_three(exact_ctx):
    assert q_number(3, exact_ctx) == Fraction(7, 4)
    assert q_factorial(3, exact_ctx) == Fraction(21, 8)


def test_q_number_negative_argument(exact_ctx):
    assert q_number(-1, exact_ctx) == -2


def test_q_number_needs_integer_in_exact_mode(exact_ctx):
    with pytest.raises(UnsupportedExactInputError):
        q_number(Fraction(1, 2), exact_ctx)


def test_q_binomial_value(exact_ctx):
    assert q_binomial(4, 2, exact_ctx) == Fraction(35, 16)
    assert gaussian_polynomial(4, 2) == (1, 1, 2, 1, 1)


@pytest.mark.parametrize("n, k", [(-1, 0), (3, 4), (3, -1)])
def test_q_binomial_rejects_out_of_range(exact_ctx, n, k):
    with pytest.raises(DomainError):
        q_binomial(n, k, exact_ctx)


@seed(1)
@given(Q_VALUES, SMALL_N)
def test_q_number_recurrence(q, n):
    ctx = QContext(q)
    assert q_number(n + 1, ctx) == 1 + q * q_number(n, ctx)


@seed(1)
@given(Q_VALUES, st.integers(min_value=2, max_value=9), st.data())
def test_q_pascal_rule(q, n, data):
    ctx = QContext(q)
    k = data.draw(st.integers(min_value=1, max_value=n - 1))
    assert q_binomial(n, k, ctx) == q_binomial(n - 1, k - 1, ctx) + q ** k * q_binomial(n - 1, k, ctx)


@seed(1)
@given(Q_VALUES, st.integers(min_value=0, max_value=9), st.data())
def test_gaussian_polynomial_matches_q_binomial(q, n, data):
    k = data.draw(st.integers(min_value=0, max_value=n))
    assert evaluate_polynomial(gaussian_polynomial(n, k), q) == q_binomial(n, k, QContext(q))


# -- Pochhammer -------------------------------------------------------------


def test_finite_pochhammer_is_exact(exact_ctx):
    assert q_pochhammer(Fraction(1, 2), 3, exact_ctx) == Fraction(21, 64)
    assert q_pochhammer(5, 0, exact_ctx) == 1


def test_infinite_pochhammer_needs_float_mode(exact_ctx):
    with pytest.raises(UnsupportedExactInputError):
        q_pochhammer(Fraction(1, 2), INFINITY, exact_ctx)


@pytest.mark.parametrize("a", [0.5, -0.7, 1.3])
@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_infinite_pochhammer_matches_mpmath(a, q):
    ctx = QContext(q, ScalarMode.FLOAT)
    assert_allclose(q_pochhammer(a, INFINITY, ctx), float(mpmath.qp(a, q)), rtol=1e-12)


def test_real_order_pochhammer_reduces_to_integer_order(float_ctx):
    assert_allclose(q_pochhammer(0.3, 4.0 + 1e-13, float_ctx), q_pochhammer(0.3, 4, float_ctx), rtol=1e-10)


def test_pochhammer_at_nonpositive_power_is_zero(float_ctx):
    assert q_pochhammer_at_power(0, float_ctx) == 0.0
    assert q_pochhammer_at_power(-3, float_ctx) == 0.0
    assert_allclose(q_pochhammer_at_power(1, float_ctx), float(mpmath.qp(0.5, 0.5)), rtol=1e-13)


def test_index_array_vanishes_for_negative_indices(float_ctx):
    values = q_pochhammer_index_array([-3, -1, 0, 2], float_ctx)
    assert values[0] == 0.0 and values[1] == 0.0
    assert_allclose(values[2], float(mpmath.qp(0.5, 0.5)), rtol=1e-13)
    assert_allclose(values[3], float(mpmath.qp(0.125, 0.5)), rtol=1e-13)


def test_binom2_handles_negative_arguments():
    assert binom2(4) == 6
    assert binom2(0) == 0
    assert binom2(-2) == 3


# -- q-addition polynomials ---------------------------------------------------


def test_ward_square(exact_ctx):
    poly = expand_q_addition(AdditionKind.WARD_ADD, 2, exact_ctx)
    assert poly.coefficients == {(0, 2): 1, (1, 1): Fraction(3, 2), (2, 0): 1}


def test_zeroth_power_is_one(exact_ctx):
    for kind in AdditionKind:
        assert expand_q_addition(kind, 0, exact_ctx) == QPoly2.constant(1)


@seed(1)
@given(Q_VALUES, st.integers(min_value=0, max_value=7))
def test_qpow_addition_is_the_literal_product(q, n):
    ctx = QContext(q)
    assert expand_q_addition(AdditionKind.QPOW_ADD, n, ctx) == factor_product(n, ctx)
    assert expand_q_addition(AdditionKind.QPOW_SUB, n, ctx) == factor_product(n, ctx, subtract=True)


@seed(1)
@given(Q_VALUES, st.integers(min_value=1, max_value=7))
def test_subtraction_is_addition_with_negated_y(q, n):
    ctx = QContext(q)
    for law in (AdditionKind.WARD_SUB, AdditionKind.COSUB, AdditionKind.QPOW_SUB):
        added = expand_q_addition(law.addition, n, ctx).substitute_scaled(1, -1)
        assert expand_q_addition(law, n, ctx) == added


def test_coadd_coefficients(exact_ctx):
    # (x ⊞_q y)^2: the middle Ward coefficient times q^(1*(1-2)) = 2
    poly = expand_q_addition(AdditionKind.COADD, 2, exact_ctx)
    assert poly.coefficient(1, 1) == Fraction(3, 2) * 2


def test_qpoly_rejects_negative_exponents():
    with pytest.raises(DomainError):
        QPoly2.monomial(-1, 0)


def test_qpoly_arithmetic():
    p = QPoly2.univariate([1, 2], "x")
    y = QPoly2.univariate([0, 1], "y")
    product = p * y
    assert product.coefficients == {(0, 1): 1, (1, 1): 2}
    assert (product - product).is_zero
    assert product.evaluate(2, 3) == 15
    assert product.truncate(1) == QPoly2.monomial(0, 1)


def test_series_compose_of_exponential_factorises(exact_ctx):
    # e_q(x ⊕_q y) has a_n = 1, and matches e_q(x) e_q(y) coefficient-wise
    degree = 6
    composed = series_q_compose([1] * (degree + 1), AdditionKind.WARD_ADD, 1, 1, exact_ctx).truncate(degree)
    weights = [1 / q_factorial(n, exact_ctx) for n in range(degree + 1)]
    product = (QPoly2.univariate(weights, "x") * QPoly2.univariate(weights, "y")).truncate(degree)
    assert composed == product
