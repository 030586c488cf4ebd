"""Tests for the equation solvers: functional equations and quarter-plane q-PDEs."""

from fractions import Fraction

import pytest
import sympy

from qapps.functional import K, separate, solve_functional, transformed_equation
from qapps.models import EquationId, EquationSpec, SolutionReport
from qapps.pde import _transform_check, residual_lattice, solve_equation, solve_transport, solve_wave, verify_telegraph
from qcore.errors import DomainError, ResidualError
from qsymbolic.rsexpr import R, S, RSExpr
from qtransform.descriptors import Atom1D, AtomTag, ExpQAdd, LinearCombo, Monomial, QAddPower, Separable, free_symbols


def _same(left, right) -> bool:
    return sympy.cancel(sympy.together(left - right)) == 0


# -- functional equations -----------------------------------------------------


def test_cauchy_separation_constant():
    expr, F = transformed_equation(EquationId.CAUCHY_WARD)
    image, _ = separate(expr, F)
    assert _same(image, K / R ** 2)


def test_cauchy_ward_solution_is_linear(exact_ctx):
    report = solve_functional(EquationId.CAUCHY_WARD, exact_ctx)
    assert report.descriptor == LinearCombo(((K, Monomial(1, 0)),))
    assert report.residual_max == 0


def test_cauchy_coadd_solution_is_linear(exact_ctx):
    report = solve_functional(EquationId.CAUCHY_COADD, exact_ctx)
    (coefficient, descriptor), = report.descriptor.terms
    assert descriptor == Monomial(1, 0)
    assert coefficient.free_symbols == {K}
    assert report.residual_max == 0


@pytest.mark.parametrize(
    "equation, tag",
    [(EquationId.ABEL_WARD, AtomTag.EXP_SMALL), (EquationId.ABEL_COADD, AtomTag.EXP_BIG)],
)
def test_abel_solutions_are_exponentials(exact_ctx, equation, tag):
    report = solve_functional(equation, exact_ctx)
    assert isinstance(report.descriptor, Separable)
    assert report.descriptor.gx.tag is tag
    assert report.descriptor.hy == Atom1D.constant(1)
    assert free_symbols(report.descriptor) == {K}
    assert report.residual_max == 0


def test_pde_is_not_a_functional_equation(exact_ctx):
    with pytest.raises(DomainError):
        solve_functional(EquationId.WAVE, exact_ctx)


# -- transport ----------------------------------------------------------------


def test_transport_gives_q_addition_square(exact_ctx):
    f = g = Atom1D.monomial(2)
    report = solve_transport(-1, f, g, exact_ctx)
    factorial = sympy.Rational(3, 2)
    assert _same(report.transform_domain.total, factorial * (1 / R ** 3 - 1 / S ** 3) / (S - R))
    assert report.descriptor == QAddPower(1, 1, 2)
    assert report.inversion_complete
    assert report.residual_max < 1e-8
    assert report.lattice_points_checked == 25


def test_transport_without_catalog_match_keeps_the_image(exact_ctx):
    report = solve_transport(2, Atom1D.exp_small(Fraction(1, 2)), Atom1D.constant(0), exact_ctx)
    assert report.descriptor is None
    assert not report.inversion_complete
    assert not report.transform_domain.is_zero


def test_transport_rejects_zero_speed(exact_ctx):
    with pytest.raises(DomainError):
        solve_transport(0, Atom1D.monomial(1), Atom1D.monomial(1), exact_ctx)


def test_transport_with_unit_data_is_constant(exact_ctx, float_ctx):
    one = Atom1D.constant(1)
    report = solve_transport(-1, one, one, exact_ctx)
    assert report.inversion_complete
    assert report.descriptor.evaluate(0.3, 0.7, float_ctx) == pytest.approx(1.0)
    assert report.residual_max < 1e-10
    assert report.checks["transform_rel_diff"] < 1e-8


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transport_gives_q_addition_powers(exact_ctx, float_ctx, n):
    f = g = Atom1D.monomial(n)
    report = solve_transport(-1, f, g, exact_ctx)
    assert report.inversion_complete
    for x, t in [(0.3, 0.7), (0.9, 0.2), (1.5, 0.5)]:
        assert report.descriptor.evaluate(x, t, float_ctx) == pytest.approx(
            QAddPower(1, 1, n).evaluate(x, t, float_ctx), rel=1e-12
        )
    assert report.residual_max < 1e-10
    assert report.checks["transform_rel_diff"] < 1e-8


def test_transform_check_rejects_a_wrong_image(exact_ctx):
    report = SolutionReport(
        equation=EquationId.TRANSPORT,
        descriptor=Monomial(0, 0),
        transform_domain=RSExpr.of(2 / (R * S), "doubled"),
    )
    with pytest.raises(ResidualError):
        _transform_check(report, Monomial(0, 0), exact_ctx)
    assert report.checks["transform_rel_diff"] == pytest.approx(0.5)


# -- telegraph ----------------------------------------------------------------


@pytest.mark.parametrize("c, alpha, beta", [(1, 0, 0), (2, 1, 3), (1, 1, 1), (2, 1, 0)])
def test_telegraph_derivation(exact_ctx, c, alpha, beta):
    report = verify_telegraph(c, alpha, beta, exact_ctx)
    assert report.checks["transform_domain_matches"] is True
    assert report.descriptor == ExpQAdd(1, 1)
    assert report.residual_max < 1e-8
    assert report.checks["transform_rel_diff"] < 1e-8


# -- wave ---------------------------------------------------------------------


def test_wave_with_zero_data(exact_ctx):
    report = solve_wave(1, Atom1D.constant(0), Atom1D.constant(0), exact_ctx)
    assert report.descriptor == LinearCombo(())
    assert report.inversion_complete
    assert report.residual_max == 0


def test_wave_formal_inverse(exact_ctx):
    report = solve_wave(1, Atom1D.monomial(1), Atom1D.constant(0), exact_ctx)
    assert _same(report.transform_domain.total, S / (R ** 2 * (S ** 2 - R ** 2)))
    assert not report.inversion_complete
    assert report.checks["partial_fractions_recombine"] is True


# -- specs and dispatch -------------------------------------------------------


def test_residual_lattice_lies_in_unit_square(float_ctx):
    points = residual_lattice(float_ctx)
    assert len(points) == 25
    assert all(0 < x < 1 and 0 < t < 1 for x, t in points)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"id": "transport", "c": 0, "f": Atom1D.monomial(1), "g": Atom1D.monomial(1)},
        {"id": "wave", "c": 1, "f": Atom1D.monomial(1)},
    ],
)
def test_equation_spec_validation(kwargs):
    with pytest.raises(DomainError):
        EquationSpec(**kwargs)


def test_solve_equation_dispatches(exact_ctx):
    spec = EquationSpec("transport", c=-1, f=Atom1D.monomial(2), g=Atom1D.monomial(2))
    record = solve_equation(spec, exact_ctx).to_record()
    assert record["equation"] == "transport"
    assert record["solution"] == "(x ⊕_q t)^2"
    assert record["inversion_complete"] is True

    functional = solve_equation(EquationSpec("abel_ward"), exact_ctx)
    assert functional.equation is EquationId.ABEL_WARD
