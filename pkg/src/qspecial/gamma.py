"""
q-Gamma functions of the first kind (product formula) and second kind (lattice integral).
"""

from __future__ import annotations

from typing import Optional

from qcalc.jackson import LatticeSumPlan, jackson_integral_improper
from qcore.combinatorics import (
    binom2,
    q_factorial,
    q_pochhammer,
    q_pochhammer_index_array,
    INFINITY,
)
from qcore.context import QContext, Scalar, is_integral
from qcore.errors import DomainError
from qspecial.exponential import q_exp_small


def _check_positive(t) -> None:
    if not t > 0:
        raise DomainError(f"q-Gamma needs t > 0, got {t}")


def q_gamma_first(t, ctx: QContext) -> Scalar:
    """
    Gamma_q(t) = (q; q)_inf (1-q)^(1-t) / (q^t; q)_inf.

    Integer t = n returns [n-1]_q! (exact in exact mode); other t need float arithmetic.
    """
    _check_positive(t)
    if is_integral(t):
        return q_factorial(int(t) - 1, ctx)
    ctx = ctx.floating()
    q = ctx.q_float
    t = float(t)
    return (
        q_pochhammer(q, INFINITY, ctx)
        * (1.0 - q) ** (1.0 - t)
        / q_pochhammer(q ** t, INFINITY, ctx)
    )


def q_gamma_second(t, ctx: QContext, plan: Optional[LatticeSumPlan] = None) -> Scalar:
    """
    gamma_q(t), the second-kind q-Gamma function.

    Business Logic:
    - integer n: q^(-binom(n, 2)) Gamma_q(n), exact in exact mode
    - real t: the Jackson sum of x^(t-1) e_q(-x) over the lattice {q^k}, A = 1;
      non-integer values depend on that lattice choice

    Raises:
        DomainError: t <= 0
        ConvergenceError: the lattice sum does not settle
    """
    _check_positive(t)
    if is_integral(t):
        n = int(t)
        return ctx.power(-binom2(n)) * q_factorial(n - 1, ctx)
    ctx = ctx.floating()
    plan = plan or LatticeSumPlan(scale=1.0, tol=ctx.default_tol)
    exponent = float(t) - 1.0
    return jackson_integral_improper(
        lambda x: x ** exponent * q_exp_small(-x, ctx), plan, ctx
    )


def q_gamma_first_integral(t, ctx: QContext, plan: Optional[LatticeSumPlan] = None) -> float:
    """
    Gamma_q(t) as the Jackson sum of x^(t-1) E_q(-qx) over the lattice {q^k / (1-q)}.

    On that lattice the kernel equals (q^(k+1); q)_inf, exactly zero for k < 0.
    """
    _check_positive(t)
    ctx = ctx.floating()
    q = ctx.q_float
    base = LatticeSumPlan(scale=1.0 - q, tol=ctx.default_tol)
    plan = plan.with_overrides(scale=1.0 - q) if plan else base
    exponent = float(t) - 1.0
    return jackson_integral_improper(
        lambda x: x ** exponent,
        plan,
        ctx,
        kernel=lambda ks: q_pochhammer_index_array(ks, ctx),
    )
