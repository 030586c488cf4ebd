"""
One-variable q-Laplace transforms: first kind (kernel E_q(-qst)) and second kind
(kernel e_q(-st)). Numeric lattice evaluation plus the closed-form atom catalog.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np
import sympy

from qcalc.derivative import LatticeFunction1D
from qcalc.jackson import IndexKernel, LatticeSumPlan, lattice_sum
from qcore.combinatorics import (
    binom2,
    q_pochhammer_index_array,
    q_pochhammer_infinite_array,
)
from qcore.context import QContext
from qcore.errors import CatalogMissError, DivergenceError, DomainError, IncompleteDataError
from qspecial.exponential import Family
from qspecial.gamma import q_gamma_first, q_gamma_second
from qsymbolic.rsexpr import S, SExpr, to_sympy
from qtransform.descriptors import AtomTag, Atom1D, as_float, is_symbolic


class Side(str, Enum):
    """Which one-variable kernel an axis carries."""

    FIRST = "first"    # E_q(-q s t), lattice A = (1-q) s
    SECOND = "second"  # e_q(-s t), lattice A = 1

    @property
    def family(self) -> Family:
        return Family.SMALL if self is Side.FIRST else Family.BIG


# ---------------------------------------------------------------------------
# lattice policy and kernels
# ---------------------------------------------------------------------------


def default_plan(side: Side, frequency: float, ctx: QContext, **overrides) -> LatticeSumPlan:
    """Kernel-adapted lattice for the first kind, A = 1 for the second kind."""
    side = Side(side)
    q = ctx.q_float
    scale = (1.0 - q) * float(frequency) if side is Side.FIRST else 1.0
    return LatticeSumPlan(scale=scale, tol=ctx.default_tol).with_overrides(**overrides)


def kernel_by_index(side: Side, frequency: float, plan: LatticeSumPlan, ctx: QContext) -> IndexKernel:
    """
    Kernel values at the nodes q^k / A as a function of the index k.

    On the adapted first-kind lattice the kernel is (q^(k+1); q)_inf computed from
    integer exponents, so every k < 0 is an exact zero.
    """
    side = Side(side)
    fctx = ctx.floating()
    q = fctx.q_float
    frequency = float(frequency)
    base = (1.0 - q) * frequency / plan.scale

    if side is Side.FIRST:
        if abs(base - 1.0) <= 1e-15:
            return lambda ks: q_pochhammer_index_array(ks, fctx)
        return lambda ks: q_pochhammer_infinite_array(q * base * q ** ks.astype(float), fctx)

    def second(ks: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return 1.0 / q_pochhammer_infinite_array(-base * q ** ks.astype(float), fctx)

    return second


def _ratio_product(rate: complex, frequency: float, x: np.ndarray, ctx: QContext) -> np.ndarray:
    """
    prod_j (1 + (1-q) rate x q^j) / (1 + (1-q) frequency x q^j), i.e. E_q(rate x) e_q(-frequency x),
    formed factor by factor so neither side overflows on its own.
    """
    q = ctx.q_float
    numerator = (1.0 - q) * rate * x
    denominator = (1.0 - q) * frequency * x
    product = np.ones(x.shape, dtype=complex if isinstance(rate, complex) else float)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        for _ in range(ctx.max_terms):
            product *= (1.0 + numerator) / (1.0 + denominator)
            if max(np.max(np.abs(numerator), initial=0.0), np.max(np.abs(denominator), initial=0.0)) < ctx.default_tol:
                break
            numerator = numerator * q
            denominator = denominator * q
    return product


def grows_against_second_kind(atom: Atom1D) -> bool:
    """E_q-family atoms outgrow any single evaluation of the e_q kernel."""
    return atom.tag is AtomTag.EXP_BIG or (atom.tag is AtomTag.TRIG and atom.selector.family is Family.BIG)


def weighted_second_kind(atom: Atom1D, frequency: float, ctx: QContext) -> Callable:
    """atom(t) * e_q(-frequency t) as one combined product, for the growing E_q-family atoms."""
    a = as_float(atom.parameter)
    if atom.tag is AtomTag.EXP_BIG:
        return lambda x: _ratio_product(a, frequency, np.asarray(x, dtype=float), ctx)

    base = atom.selector.base
    if base in ("cosh", "sinh"):
        sign = 1.0 if base == "cosh" else -1.0

        def hyperbolic(x):
            x = np.asarray(x, dtype=float)
            return 0.5 * (_ratio_product(a, frequency, x, ctx) + sign * _ratio_product(-a, frequency, x, ctx))

        return hyperbolic

    def circular(x):
        value = _ratio_product(complex(0.0, a), frequency, np.asarray(x, dtype=float), ctx)
        return value.real if base == "cos" else value.imag

    return circular




def check_region(atom: Atom1D, frequency: float, side: Side, ctx: QContext, axis: str) -> None:
    """Refuse atoms whose lattice sum has no finite value at this frequency."""
    if atom.tag not in (AtomTag.EXP_SMALL, AtomTag.EXP_BIG, AtomTag.TRIG):
        return
    a = as_float(atom.parameter)
    if atom.tag is AtomTag.TRIG:
        family, magnitude = atom.selector.family, abs(a)
    elif atom.tag is AtomTag.EXP_SMALL:
        family, magnitude = Family.SMALL, a
    else:
        family, magnitude = Family.BIG, abs(a)

    if side is Side.FIRST and family is Family.SMALL and not magnitude < frequency:
        raise DivergenceError(
            f"{atom.render('t')} lies outside the first-kind region (needs {magnitude} < s={frequency})",
            axis=axis,
        )
    if side is Side.SECOND and family is Family.BIG and not magnitude < ctx.q_float * frequency:
        raise DivergenceError(
            f"{atom.render('t')} lies outside the second-kind region (needs {magnitude} < q s={ctx.q_float * frequency})",
            axis=axis,
        )


def qlap1d_numeric(
    f: Union[Atom1D, LatticeFunction1D, Callable],
    s: float,
    side: Side,
    ctx: QContext,
    plan: Optional[LatticeSumPlan] = None,
    axis: str = "x",
    power: int = 0,
) -> float:
    """
    Numeric one-variable transform of t^power f(t) on the kernel's lattice.

    Business Logic:
    - first kind: f(t) E_q(-qst) summed over {q^k / ((1-q)s)}; the kernel zeros
      end the large-t tail at k = -1
    - second kind: f(t) e_q(-st) summed bilaterally over {q^k}
    - catalog atoms are checked against their convergence region first; outside it
      the result is a divergence, never an analytic continuation
    - E_q-family atoms under the second kind are multiplied into the kernel factor
      by factor
    - power > 0 weights the integrand by t^power after the kernel is folded in,
      so the moments of growing atoms keep the combined product

    Raises:
        DivergenceError: out-of-region atom or a growing tail
        ConvergenceError: a tail exhausts the window
    """
    side = Side(side)
    if not s > 0:
        raise DomainError(f"transform variable must be positive, got {s}")
    fctx = ctx.floating()
    s = float(s)
    plan = plan or default_plan(side, s, fctx)

    atom = f if isinstance(f, Atom1D) else getattr(f, "descriptor", None)
    integrand = f
    kernel = kernel_by_index(side, s, plan, fctx)
    if isinstance(atom, Atom1D):
        if atom.is_zero:
            return 0.0
        check_region(atom, s, side, fctx, axis)
        if side is Side.SECOND and grows_against_second_kind(atom) and plan.scale == 1.0:
            integrand, kernel = weighted_second_kind(atom, s, fctx), None
        else:
            integrand = lambda t: atom.evaluate(t, fctx)  # noqa: E731
    if power:
        if power < 0:
            raise DomainError(f"moment power must be non-negative, got {power}")
        base = integrand
        integrand = lambda t: np.asarray(t, dtype=float) ** power * base(t)  # noqa: E731

    return lattice_sum(integrand, plan, fctx, kernel=kernel, axis=axis).value


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _exp_image(rate: sympy.Expr, side: Side, q: sympy.Expr) -> sympy.Expr:
    if side is Side.FIRST:
        return 1 / (S - rate)
    return q / (q * S - rate)


def _region(*conditions) -> tuple:
    return tuple(c for c in conditions if c is not sympy.true)


def _monomial_image(alpha, side: Side, ctx: QContext) -> SExpr:
    if is_symbolic(alpha):
        raise DomainError(f"monomial exponent {alpha} must be numeric for a closed form")
    gamma = q_gamma_first if side is Side.FIRST else q_gamma_second
    coefficient = to_sympy(gamma(alpha + 1, ctx))
    exponent = to_sympy(alpha) + 1
    name = "Γ_q" if side is Side.FIRST else "γ_q"
    return SExpr.of(coefficient / S ** exponent, f"{name}(α+1)/s^(α+1), α={alpha}")


def _trig_image(selector, a: sympy.Expr, side: Side, q: sympy.Expr) -> sympy.Expr:
    """cos/sin/cosh/sinh images assembled from the exponential images at ±ia or ±a."""
    image = lambda rate: _exp_image(rate, side, q)  # noqa: E731
    base = selector.base
    if base == "cos":
        expr = (image(sympy.I * a) + image(-sympy.I * a)) / 2
    elif base == "sin":
        expr = (image(sympy.I * a) - image(-sympy.I * a)) / (2 * sympy.I)
    elif base == "cosh":
        expr = (image(a) + image(-a)) / 2
    else:
        expr = (image(a) - image(-a)) / 2
    return sympy.cancel(sympy.together(expr))


@lru_cache(maxsize=512)
def qlap1d_catalog(atom: Atom1D, side: Side, ctx: QContext) -> SExpr:
    """
    Closed-form one-variable image of a catalog atom, as an expression in s.

    Business Logic:
    - both kinds: c -> c/s; t^alpha -> Gamma_q(alpha+1)/s^(alpha+1) (first) or
      gamma_q(alpha+1)/s^(alpha+1) (second)
    - first kind: e_q(at) -> 1/(s-a); the small q-trig family through 1/(s ∓ ia), 1/(s ∓ a)
    - second kind: E_q(at) -> q/(qs-a); the big q-trig family through q/(qs ∓ ia), q/(qs ∓ a)
    - the image carries its convergence region as sympy inequalities in s

    Raises:
        CatalogMissError: an exponential or trig family paired with the other kind
    """
    side = Side(side)
    q = to_sympy(ctx.q)

    if atom.tag is AtomTag.CONSTANT:
        return SExpr.of(to_sympy(atom.parameter) / S, "c/s")
    if atom.tag is AtomTag.MONOMIAL:
        return _monomial_image(atom.parameter, side, ctx)

    a = to_sympy(atom.parameter)
    family = {
        AtomTag.EXP_SMALL: Family.SMALL,
        AtomTag.EXP_BIG: Family.BIG,
    }.get(atom.tag) or atom.selector.family
    if family is not side.family:
        raise CatalogMissError(f"no closed form for {atom.render('t')} under the {side.value}-kind transform")

    if atom.tag in (AtomTag.EXP_SMALL, AtomTag.EXP_BIG):
        expr = _exp_image(a, side, q)
        bound = S if side is Side.FIRST else q * S
        return SExpr.of(expr, f"{atom.render('t')} -> {expr}", _region(sympy.StrictGreaterThan(bound, a)))

    expr = _trig_image(atom.selector, a, side, q)
    bound = S if side is Side.FIRST else q * S
    return SExpr.of(
        expr, f"{atom.render('t')} -> {expr}", _region(sympy.StrictGreaterThan(bound, sympy.Abs(a)))
    )


def qlap1d_derivative_image(
    image: SExpr,
    side: Side,
    order: int,
    initial_values: Sequence,
    ctx: QContext,
) -> SExpr:
    """
    Image of D_q^n f from the image of f and the values D_q^k f(0), k < n.

    Business Logic:
    - first kind: s^n F(s) - sum_k s^(n-1-k) f_k
    - second kind: s^n q^(-binom(n+1, 2)) F(s q^(-n)) - sum_k s^(n-1-k) q^(-binom(n-k, 2)) f_k

    Raises:
        IncompleteDataError: fewer than n initial values
    """
    side = Side(side)
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    if len(initial_values) < order:
        raise IncompleteDataError(f"order-{order} derivative image needs {order} initial values, got {len(initial_values)}")
    q = to_sympy(ctx.q)
    n = order
    if side is Side.FIRST:
        body = S ** n * image.total
        region = image.region
    else:
        shift = q ** (-n)
        body = S ** n * q ** (-binom2(n + 1)) * image.total.subs(S, S * shift)
        region = _region(*(c.subs(S, S * shift) for c in image.region))
    for k in range(n):
        weight = 1 if side is Side.FIRST else q ** (-binom2(n - k))
        body -= S ** (n - 1 - k) * weight * to_sympy(initial_values[k])
    return SExpr.of(sympy.cancel(sympy.together(body)), f"{side.value}-kind derivative rule, order {n}", region)
