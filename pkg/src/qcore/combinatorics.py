"""
q-numbers, q-factorials, q-binomials and q-Pochhammer symbols.
Exact (Fraction) in exact mode; the infinite and real-order Pochhammer symbols are float only.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from qcore.context import QContext, Scalar, is_integral
from qcore.errors import (
    ConvergenceError,
    DomainError,
    PoleError,
    UnsupportedExactInputError,
)

INFINITY = math.inf


def binom2(n: int) -> int:
    """binomial(n, 2) = n(n-1)/2, defined for every integer n."""
    return n * (n - 1) // 2


def q_number(a, ctx: QContext) -> Scalar:
    """
    The basic number [a]_q = (1 - q**a) / (1 - q).

    Raises:
        UnsupportedExactInputError: non-integer a in exact mode
    """
    if ctx.is_exact:
        if not is_integral(a):
            raise UnsupportedExactInputError(f"[{a}]_q needs an integer in exact mode")
        a = int(a)
        if a >= 0:
            return sum((ctx.q ** k for k in range(a)), start=type(ctx.q)(0))
        return (1 - ctx.q ** a) / (1 - ctx.q)
    q = ctx.q_float
    return (1.0 - q ** float(a)) / (1.0 - q)


def q_factorial(n: int, ctx: QContext) -> Scalar:
    """[n]_q! = [1]_q [2]_q ... [n]_q with [0]_q! = 1."""
    if not is_integral(n) or n < 0:
        raise DomainError(f"q-factorial needs a non-negative integer, got {n}")
    result = ctx.coerce(1)
    for k in range(1, int(n) + 1):
        result *= q_number(k, ctx)
    return result


def q_binomial(n: int, k: int, ctx: QContext) -> Scalar:
    """Gaussian binomial [n choose k]_q."""
    if not is_integral(n) or n < 0:
        raise DomainError(f"q-binomial needs a non-negative integer n, got {n}")
    if not is_integral(k) or not 0 <= k <= n:
        raise DomainError(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    n, k = int(n), int(k)
    return q_factorial(n, ctx) / (q_factorial(k, ctx) * q_factorial(n - k, ctx))


@lru_cache(maxsize=None)
def gaussian_polynomial(n: int, k: int) -> Tuple[int, ...]:
    """
    Integer coefficients (lowest degree first) of [n choose k] as a polynomial in q,
    built from the q-Pascal rule [n, k] = [n-1, k-1] + q**k [n-1, k].
    """
    if not 0 <= k <= n:
        raise DomainError(f"gaussian_polynomial needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return (1,)
    left = gaussian_polynomial(n - 1, k - 1)
    right = gaussian_polynomial(n - 1, k)
    coeffs = [0] * max(len(left), len(right) + k)
    for i, c in enumerate(left):
        coeffs[i] += c
    for i, c in enumerate(right):
        coeffs[i + k] += c
    return tuple(coeffs)


def evaluate_polynomial(coeffs, x):
    """Horner evaluation, lowest degree first."""
    result = 0 * x
    for c in reversed(coeffs):
        result = result * x + c
    return result


def q_pochhammer(a, n: Union[int, float], ctx: QContext) -> Scalar:
    """
    q-shifted factorial (a; q)_n.

    Business Logic:
    - integer n >= 0: the finite product of (1 - a q**k), k < n, exact in exact mode
    - n = infinity: product truncated once |factor - 1| < default_tol
    - real n: (a; q)_inf / (a q**n; q)_inf with the real principal power of q

    Raises:
        UnsupportedExactInputError: infinite or real order in exact mode
        ConvergenceError: max_terms exhausted before the tolerance is met
        PoleError: real order whose denominator product vanishes
    """
    if is_integral(n) and n != INFINITY:
        if n < 0:
            raise DomainError(f"finite Pochhammer order must be >= 0, got {n}")
        a = ctx.coerce(a)
        result = ctx.coerce(1)
        for k in range(int(n)):
            result *= 1 - a * ctx.q ** k
        return result

    if ctx.is_exact:
        raise UnsupportedExactInputError("infinite and real-order Pochhammer symbols are float only")

    if n == INFINITY:
        return _pochhammer_infinite(float(a), ctx)

    denominator = _pochhammer_infinite(float(a) * ctx.q_float ** float(n), ctx)
    if denominator == 0.0:
        raise PoleError(f"(a q^{n}; q)_inf vanishes for a={a}")
    return _pochhammer_infinite(float(a), ctx) / denominator


def _pochhammer_infinite(a: float, ctx: QContext) -> float:
    q = ctx.q_float
    result = 1.0
    term = a
    for k in range(ctx.max_terms):
        result *= 1.0 - term
        if result == 0.0 or abs(term) < ctx.default_tol:
            return result
        term *= q
    raise ConvergenceError(
        f"(a; q)_inf did not settle within {ctx.max_terms} factors (a={a}, q={q})",
        terms=ctx.max_terms,
    )


def q_pochhammer_at_power(m: int, ctx: QContext) -> float:
    """(q**m; q)_inf from integer exponents, so that m <= 0 gives an exact zero."""
    if m <= 0:
        return 0.0
    return _pochhammer_infinite(ctx.q_float ** m, ctx)


def q_pochhammer_infinite_array(a, ctx: QContext) -> np.ndarray:
    """Vectorised (a; q)_inf over an array of bases."""
    a = np.asarray(a, dtype=float)
    q = ctx.q_float
    result = np.ones_like(a)
    term = a.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(ctx.max_terms):
            result *= 1.0 - term
            if not np.any(np.abs(term) >= ctx.default_tol):
                return result
            term *= q
    raise ConvergenceError(
        f"vectorised (a; q)_inf did not settle within {ctx.max_terms} factors",
        terms=ctx.max_terms,
    )


def q_pochhammer_index_array(ks: np.ndarray, ctx: QContext) -> np.ndarray:
    """
    (q**(k+1); q)_inf for integer indices k, from integer exponents.

    Every k <= -1 contains the factor (1 - q**0) and is returned as exact 0.
    """
    ks = np.asarray(ks, dtype=np.int64)
    q = ctx.q_float
    result = np.ones(ks.shape, dtype=float)
    negative = ks < 0
    positive = ~negative
    if np.any(positive):
        bases = q ** (ks[positive] + 1).astype(float)
        result[positive] = q_pochhammer_infinite_array(bases, ctx)
    result[negative] = 0.0
    return result
