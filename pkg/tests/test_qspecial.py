"""Tests for qspecial: basic hypergeometric series, q-exponentials, q-trig and q-Gamma."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qcore.combinatorics import q_factorial, q_number
from qcore.context import QContext, ScalarMode
from qcore.errors import ConvergenceError, DomainError, PoleError
from qspecial.exponential import (
    Family,
    TrigSelector,
    exp_series_coefficients,
    q_exp_big,
    q_exp_big_series,
    q_exp_small,
    q_exp_small_series,
    q_trig,
    trig_series_coefficients,
)
from qspecial.gamma import q_gamma_first, q_gamma_first_integral, q_gamma_second
from qspecial.hypergeometric import q_hypergeom, sum_series

FLOAT_Q = st.sampled_from([0.3, 0.5, 0.7])
ARGUMENTS = st.floats(min_value=-1.2, max_value=1.2, allow_nan=False)


# -- series machinery -------------------------------------------------------


def test_sum_series_stops_on_geometric_terms(float_ctx):
    terms = (0.5 ** k for k in range(10_000))
    assert_allclose(sum_series(terms, float_ctx), 2.0, rtol=1e-13)


def test_sum_series_raises_when_terms_never_shrink():
    ctx = QContext(0.5, ScalarMode.FLOAT, max_terms=50)
    terms = (1.0 for _ in range(10_000))
    with pytest.raises(ConvergenceError):
        sum_series(terms, ctx)


def test_q_binomial_theorem(float_ctx):
    # 1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf
    a, z, q = 0.3, 0.4, 0.5
    expected = float(mpmath.qp(a * z, q) / mpmath.qp(z, q))
    assert_allclose(q_hypergeom([a], [], z, float_ctx), expected, rtol=1e-12)


@pytest.mark.parametrize("upper, lower, z", [([0.3, 0.4], [0.6], 0.2), ([0.1, -0.5], [0.25], -0.7)])
def test_two_phi_one_matches_mpmath(float_ctx, upper, lower, z):
    expected = float(mpmath.qhyper(upper, lower, 0.5, z))
    assert_allclose(q_hypergeom(upper, lower, z, float_ctx), expected, rtol=1e-11)


def test_hypergeom_at_zero_is_one(float_ctx):
    assert q_hypergeom([0.3], [0.6], 0.0, float_ctx) == 1.0


def test_hypergeom_lower_parameter_pole(float_ctx):
    # b = q^-1 makes the factor (1 - b q^k) vanish at k = 1
    with pytest.raises(PoleError):
        q_hypergeom([0.3], [2.0], 0.1, float_ctx)


# -- exponentials -----------------------------------------------------------


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_small_exponential_matches_mpmath(q):
    ctx = QContext(q, ScalarMode.FLOAT)
    for z in (-2.0, 0.4, 1.1):
        assert_allclose(q_exp_small(z, ctx), float(1 / mpmath.qp((1 - q) * z, q)), rtol=1e-12)


@seed(1)
@given(FLOAT_Q, ARGUMENTS)
def test_exponentials_are_reciprocal(q, z):
    ctx = QContext(q, ScalarMode.FLOAT)
    assert_allclose(q_exp_small(z, ctx) * q_exp_big(-z, ctx), 1.0, rtol=1e-12)


@seed(1)
@given(FLOAT_Q, st.floats(min_value=-0.9, max_value=0.9, allow_nan=False))
def test_product_forms_match_series(q, z):
    ctx = QContext(q, ScalarMode.FLOAT)
    assert_allclose(q_exp_small(z, ctx), q_exp_small_series(z, ctx), rtol=1e-11)
    assert_allclose(q_exp_big(z, ctx), q_exp_big_series(z, ctx), rtol=1e-11)


def test_exponentials_accept_arrays(float_ctx):
    z = np.array([0.1, 0.5, -1.0])
    assert_allclose(q_exp_small(z, float_ctx), [q_exp_small(v, float_ctx) for v in z], rtol=1e-13)


def test_small_exponential_pole(float_ctx):
    with pytest.raises(PoleError):
        q_exp_small(2.0, float_ctx)


def test_big_exponential_zero(float_ctx):
    assert q_exp_big(-2.0, float_ctx) == 0.0


def test_small_series_outside_radius(float_ctx):
    with pytest.raises(ConvergenceError):
        q_exp_small_series(2.5, float_ctx)


def test_exponential_coefficients_are_exact(exact_ctx):
    assert exp_series_coefficients(1, Family.SMALL, 3, exact_ctx) == [1, 1, Fraction(2, 3), Fraction(8, 21)]
    big = exp_series_coefficients(2, Family.BIG, 2, exact_ctx)
    assert big == [1, 2, 4 * Fraction(1, 2) / Fraction(3, 2)]


# -- q-trig -----------------------------------------------------------------


@seed(1)
@given(FLOAT_Q, ARGUMENTS)
def test_pythagorean_pairing_of_families(q, z):
    ctx = QContext(q, ScalarMode.FLOAT)
    circular = (
        q_trig(z, TrigSelector.COS_SMALL, ctx) * q_trig(z, TrigSelector.COS_BIG, ctx)
        + q_trig(z, TrigSelector.SIN_SMALL, ctx) * q_trig(z, TrigSelector.SIN_BIG, ctx)
    )
    hyperbolic = (
        q_trig(z, TrigSelector.COSH_SMALL, ctx) * q_trig(z, TrigSelector.COSH_BIG, ctx)
        - q_trig(z, TrigSelector.SINH_SMALL, ctx) * q_trig(z, TrigSelector.SINH_BIG, ctx)
    )
    assert_allclose(circular, 1.0, rtol=1e-11)
    assert_allclose(hyperbolic, 1.0, rtol=1e-11)


def test_hyperbolic_from_exponentials(float_ctx):
    z = 0.8
    cosh = 0.5 * (q_exp_small(z, float_ctx) + q_exp_small(-z, float_ctx))
    sinh = 0.5 * (q_exp_big(z, float_ctx) - q_exp_big(-z, float_ctx))
    assert_allclose(q_trig(z, TrigSelector.COSH_SMALL, float_ctx), cosh, rtol=1e-12)
    assert_allclose(q_trig(z, TrigSelector.SINH_BIG, float_ctx), sinh, rtol=1e-12)


def test_small_trig_outside_series_domain(float_ctx):
    with pytest.raises(ConvergenceError):
        q_trig(3.0, TrigSelector.COS_SMALL, float_ctx)


def test_big_trig_has_no_radius_limit(float_ctx):
    assert np.isfinite(q_trig(3.0, TrigSelector.COS_BIG, float_ctx))


def test_selector_helpers():
    assert TrigSelector.of("sinh", Family.BIG) is TrigSelector.SINH_BIG
    assert TrigSelector.COS_SMALL.partner() is TrigSelector.SIN_SMALL
    assert TrigSelector.SIN_BIG.label == "Sin_q"
    assert TrigSelector.COSH_BIG.parity == 0


def test_trig_coefficients_alternate(exact_ctx):
    coeffs = trig_series_coefficients(TrigSelector.COS_SMALL, 1, 4, exact_ctx)
    assert coeffs[1] == 0 and coeffs[3] == 0
    assert coeffs[2] == -1 / q_factorial(2, exact_ctx)
    assert coeffs[4] == 1 / q_factorial(4, exact_ctx)


# -- q-Gamma ----------------------------------------------------------------


def test_gamma_first_at_integers_is_exact(exact_ctx):
    assert q_gamma_first(4, exact_ctx) == Fraction(21, 8)
    assert q_gamma_first(1, exact_ctx) == 1


def test_gamma_second_at_integers(exact_ctx):
    # q^(-binom(3, 2)) [2]_q! = 8 * 3/2
    assert q_gamma_second(3, exact_ctx) == 12


@pytest.mark.parametrize("t", [0.5, 1.5, 2.5, 3.7])
def test_gamma_first_matches_mpmath(float_ctx, t):
    assert_allclose(q_gamma_first(t, float_ctx), float(mpmath.qgamma(t, 0.5)), rtol=1e-11)


@settings(max_examples=20, deadline=None)
@seed(1)
@given(st.floats(min_value=0.2, max_value=4.0, allow_nan=False))
def test_gamma_recurrences(t):
    ctx = QContext(0.5, ScalarMode.FLOAT)
    assert_allclose(q_gamma_first(t + 1, ctx), q_number(t, ctx) * q_gamma_first(t, ctx), rtol=1e-10)
    assert_allclose(
        q_gamma_second(t + 1, ctx), 0.5 ** (-t) * q_number(t, ctx) * q_gamma_second(t, ctx), rtol=1e-9
    )


@pytest.mark.parametrize("t", [0.5, 2.0, 3.5])
def test_gamma_first_integral_matches_product(float_ctx, t):
    assert_allclose(q_gamma_first_integral(t, float_ctx), q_gamma_first(t, float_ctx), rtol=1e-10)


def test_gamma_rejects_non_positive_arguments(exact_ctx):
    with pytest.raises(DomainError):
        q_gamma_first(0, exact_ctx)
    with pytest.raises(DomainError):
        q_gamma_second(-1.5, exact_ctx)
