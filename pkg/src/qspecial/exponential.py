"""
The two q-exponentials e_q and E_q and the eight q-trigonometric/hyperbolic functions.
Product forms for the exponentials, power series for the trig family.
"""

from __future__ import annotations

from enum import Enum
from typing import List

import numpy as np

from qcore.combinatorics import binom2, q_factorial
from qcore.context import QContext, Scalar
from qcore.errors import ConvergenceError, DomainError, PoleError
from qspecial.hypergeometric import sum_series


class Family(str, Enum):
    """small: the e_q family (Ward ⊕_q); big: the E_q family (coaddition ⊞_q)."""

    SMALL = "small"
    BIG = "big"


class TrigSelector(str, Enum):
    COS_SMALL = "cos_small"
    SIN_SMALL = "sin_small"
    COS_BIG = "cos_big"
    SIN_BIG = "sin_big"
    COSH_SMALL = "cosh_small"
    SINH_SMALL = "sinh_small"
    COSH_BIG = "cosh_big"
    SINH_BIG = "sinh_big"

    @classmethod
    def of(cls, name: str, family: Family) -> TrigSelector:
        return cls(f"{name}_{Family(family).value}")

    @property
    def base(self) -> str:
        """cos, sin, cosh or sinh."""
        return self.value.split("_")[0]

    @property
    def family(self) -> Family:
        return Family(self.value.split("_")[1])

    @property
    def is_hyperbolic(self) -> bool:
        return self.base in ("cosh", "sinh")

    @property
    def parity(self) -> int:
        """0 for the even functions (cos, cosh), 1 for the odd ones."""
        return 0 if self.base in ("cos", "cosh") else 1

    def partner(self) -> TrigSelector:
        """cos <-> sin, cosh <-> sinh within the same family."""
        swap = {"cos": "sin", "sin": "cos", "cosh": "sinh", "sinh": "cosh"}
        return TrigSelector.of(swap[self.base], self.family)

    @property
    def label(self) -> str:
        name = self.base if self.family is Family.SMALL else self.base.capitalize()
        return f"{name}_q"


def _as_array(z):
    scalar = np.ndim(z) == 0
    return np.asarray(z, dtype=float), scalar


def _unwrap(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def q_exp_small(z, ctx: QContext):
    """
    e_q(z) = 1 / ((1-q) z; q)_inf, evaluated as a product (valid past the series radius).

    Accepts a scalar or a numpy array.

    Raises:
        PoleError: (1-q) z q^j = 1 for some j, within tolerance
    """
    ctx = ctx.floating()
    z, scalar = _as_array(z)
    q = ctx.q_float
    base = (1.0 - q) * z
    product = np.ones_like(base)
    term = base.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(ctx.max_terms):
            factor = 1.0 - term
            if np.any(np.abs(factor) < ctx.default_tol):
                raise PoleError(f"e_q has a pole at z={_unwrap(z, scalar)!r} (q={q})")
            product *= factor
            if not np.any(np.abs(term) >= ctx.default_tol):
                return _unwrap(1.0 / product, scalar)
            term *= q
    raise ConvergenceError(f"e_q product did not settle within {ctx.max_terms} factors")


def q_exp_big(z, ctx: QContext):
    """E_q(z) = (-(1-q) z; q)_inf; entire, exact zeros at z = -q^(-j)/(1-q)."""
    ctx = ctx.floating()
    z, scalar = _as_array(z)
    q = ctx.q_float
    product = np.ones_like(z)
    term = -(1.0 - q) * z
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(ctx.max_terms):
            product *= 1.0 - term
            if not np.any(np.abs(term) >= ctx.default_tol):
                return _unwrap(product, scalar)
            term *= q
    raise ConvergenceError(f"E_q product did not settle within {ctx.max_terms} factors")


def q_exp_small_series(z, ctx: QContext):
    """Series form sum z^n / [n]_q!; converges for |(1-q) z| < 1."""
    return _exp_series(z, Family.SMALL, ctx)


def q_exp_big_series(z, ctx: QContext):
    """Series form sum q^binom(n, 2) z^n / [n]_q!."""
    return _exp_series(z, Family.BIG, ctx)


def _exp_series(z, family: Family, ctx: QContext):
    ctx = ctx.floating()
    z, scalar = _as_array(z)
    q = ctx.q_float
    if family is Family.SMALL and np.any(np.abs(z) * (1.0 - q) >= 1.0):
        raise ConvergenceError("e_q series diverges for |z|(1-q) >= 1; use the product form")

    def terms():
        term = np.ones_like(z)
        n = 0
        while True:
            yield term
            n += 1
            ratio = z / ((1.0 - q ** n) / (1.0 - q))
            if family is Family.BIG:
                ratio = ratio * q ** (n - 1)
            term = term * ratio

    return _unwrap(sum_series(terms(), ctx), scalar)


def q_trig(z, which: TrigSelector, ctx: QContext):
    """
    q-trigonometric and q-hyperbolic functions as real power series.

    Business Logic:
    - cos/sin: alternating even/odd parts; cosh/sinh: the same parts without signs
    - small family: weights 1/[m]_q!; big family: q^binom(m, 2)/[m]_q!
    - small family converges only for |z|(1-q) < 1
    - accepts scalars or numpy arrays

    Raises:
        ConvergenceError: small-family argument outside the series domain,
            or the stopping rule is not met
    """
    which = TrigSelector(which)
    ctx = ctx.floating()
    z, scalar = _as_array(z)
    q = ctx.q_float
    if which.family is Family.SMALL and np.any(np.abs(z) * (1.0 - q) >= 1.0):
        raise ConvergenceError(
            f"{which.label} series diverges for |z|(1-q) >= 1 (max |z|={float(np.max(np.abs(z)))})"
        )
    sign = 1.0 if which.is_hyperbolic else -1.0
    big = which.family is Family.BIG

    def terms():
        m = which.parity
        term = z.copy() if m else np.ones_like(z)
        while True:
            yield term
            ratio = sign * z * z / (((1.0 - q ** (m + 1)) / (1.0 - q)) * ((1.0 - q ** (m + 2)) / (1.0 - q)))
            if big:
                ratio = ratio * q ** (2 * m + 1)
            term = term * ratio
            m += 2

    return _unwrap(sum_series(terms(), ctx), scalar)


def exp_series_coefficients(a: Scalar, family: Family, degree: int, ctx: QContext) -> List[Scalar]:
    """Taylor coefficients of e_q(a t) (small) or E_q(a t) (big), exact in exact mode."""
    family = Family(family)
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    a = ctx.coerce(a)
    coeffs = []
    for n in range(degree + 1):
        c = a ** n / q_factorial(n, ctx)
        if family is Family.BIG:
            c *= ctx.power(binom2(n))
        coeffs.append(c)
    return coeffs


def trig_series_coefficients(which: TrigSelector, a: Scalar, degree: int, ctx: QContext) -> List[Scalar]:
    """Taylor coefficients of a q-trig function of a t, exact in exact mode."""
    which = TrigSelector(which)
    base = exp_series_coefficients(a, which.family, degree, ctx)
    coeffs = []
    for m, c in enumerate(base):
        if m % 2 != which.parity:
            coeffs.append(ctx.coerce(0))
            continue
        if not which.is_hyperbolic and (m // 2) % 2:
            c = -c
        coeffs.append(c)
    return coeffs
