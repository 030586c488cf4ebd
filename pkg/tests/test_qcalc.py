"""Tests for qcalc: Jackson q-derivatives and q-integrals."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qcalc.derivative import LatticeFunction1D, q_derivative, q_partial
from qcalc.jackson import (
    LatticeSumPlan,
    jackson_integral_finite,
    jackson_integral_improper,
    jackson_integral_improper_2d,
    lattice_sum,
)
from qcore.combinatorics import q_number
from qcore.context import QContext
from qcore.errors import ConvergenceError, DivergenceError, DomainError
from qspecial.exponential import q_exp_small

POWERS = st.integers(min_value=0, max_value=8)


# -- derivatives ------------------------------------------------------------


@seed(1)
@given(POWERS, st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=20))
def test_derivative_of_power_is_exact(n, x):
    ctx = QContext(Fraction(1, 2))
    value = q_derivative(lambda t: t ** n, x, 1, ctx)
    expected = q_number(n, ctx) * x ** (n - 1) if n else 0
    assert value == expected


def test_second_derivative_of_cube(exact_ctx):
    # [3]_q [2]_q x
    assert q_derivative(lambda t: t ** 3, Fraction(2), 2, exact_ctx) == Fraction(7, 4) * Fraction(3, 2) * 2


def test_derivative_of_small_exponential(float_ctx):
    x = 0.7
    assert_allclose(q_derivative(lambda t: q_exp_small(t, float_ctx), x, 1, float_ctx), q_exp_small(x, float_ctx))


def test_derivative_at_zero_is_a_lattice_limit(float_ctx):
    value = q_derivative(lambda t: t + t * t, 0, 1, float_ctx)
    assert value == pytest.approx(1.0, abs=1e-6)


def test_derivative_accepts_arrays(float_ctx):
    xs = np.array([0.5, 1.0, 2.0])
    assert_allclose(q_derivative(lambda t: t ** 2, xs, 1, float_ctx), 1.5 * xs)


def test_derivative_order_must_be_positive(float_ctx):
    with pytest.raises(DomainError):
        q_derivative(lambda t: t, 1.0, 0, float_ctx)


def test_lattice_function_keeps_descriptor():
    f = LatticeFunction1D(lambda t: 2 * t, descriptor="tag")
    assert f(3) == 6
    assert f.descriptor == "tag"


def test_mixed_partial_is_exact(exact_ctx):
    f = lambda x, y: x ** 2 * y ** 3  # noqa: E731
    point = (Fraction(2), Fraction(3))
    expected = Fraction(3, 2) * 2 * Fraction(7, 4) * 9
    assert q_partial(f, "x", point, (1, 1), exact_ctx) == expected
    assert q_partial(f, "y", point, (1, 1), exact_ctx) == expected


def test_partial_rejects_unknown_variable(exact_ctx):
    with pytest.raises(DomainError):
        q_partial(lambda x, y: x, "z", (1, 1), (1, 0), exact_ctx)


# -- integrals --------------------------------------------------------------


def test_finite_integral_of_square(float_ctx):
    # integral of x^2 over [0, 1] is 1/[3]_q
    assert_allclose(jackson_integral_finite(lambda x: x * x, 0, 1, float_ctx), 4 / 7, rtol=1e-13)


def test_finite_integral_is_additive(float_ctx):
    whole = jackson_integral_finite(np.cos, 0, 2, float_ctx)
    parts = jackson_integral_finite(np.cos, 0, 1, float_ctx) + jackson_integral_finite(np.cos, 1, 2, float_ctx)
    assert_allclose(whole, parts, rtol=1e-13)


def test_finite_integral_edge_cases(float_ctx):
    assert jackson_integral_finite(lambda x: 1 / 0, 1.5, 1.5, float_ctx) == 0.0
    with pytest.raises(DomainError):
        jackson_integral_finite(lambda x: x, -1, 1, float_ctx)


def test_improper_integral_gives_second_kind_gamma(float_ctx):
    # sum over {q^k} of x e_q(-x) is gamma_q(2) = q^(-1) = 2
    value = jackson_integral_improper(lambda x: x * q_exp_small(-x, float_ctx), LatticeSumPlan(), float_ctx)
    assert_allclose(value, 2.0, rtol=1e-12)


def test_lattice_sum_reports_window(float_ctx):
    result = lattice_sum(lambda x: q_exp_small(-x, float_ctx), LatticeSumPlan(), float_ctx)
    assert result.k_lo < 0 < result.k_hi
    assert result.terms == result.k_hi - result.k_lo + 1


def test_growing_tail_is_a_divergence(float_ctx):
    with pytest.raises(DivergenceError) as excinfo:
        jackson_integral_improper(lambda x: x * x, LatticeSumPlan(), float_ctx)
    assert excinfo.value.tail == "large-x"
    assert excinfo.value.axis == "x"


def test_exhausted_window_is_a_convergence_failure(float_ctx):
    plan = LatticeSumPlan(k_min=0, k_max=5)
    with pytest.raises(ConvergenceError):
        lattice_sum(lambda x: np.ones_like(x), plan, float_ctx)


def test_two_dimensional_sum_factorises(float_ctx):
    plan = LatticeSumPlan()
    one = jackson_integral_improper(lambda x: x * q_exp_small(-x, float_ctx), plan, float_ctx)
    two = jackson_integral_improper_2d(
        lambda x, y: x * q_exp_small(-x, float_ctx) * q_exp_small(-y, float_ctx), plan, plan, float_ctx
    )
    assert_allclose(two, one * 1.0, rtol=1e-11)


def test_two_dimensional_divergence_names_the_axis(float_ctx):
    plan = LatticeSumPlan()
    with pytest.raises(DivergenceError) as excinfo:
        jackson_integral_improper_2d(lambda x, y: q_exp_small(-x, float_ctx) * y * y, plan, plan, float_ctx)
    assert excinfo.value.axis == "y"


@pytest.mark.parametrize(
    "kwargs",
    [{"scale": 0.0}, {"k_min": 1}, {"k_max": -1}, {"tol": 0.0}, {"consecutive_small": 0}],
)
def test_plan_validation(kwargs):
    with pytest.raises(DomainError):
        LatticeSumPlan(**kwargs)
