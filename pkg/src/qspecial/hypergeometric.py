"""
Basic hypergeometric series r_phi_s and the shared series stopping rule.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from qcore.context import QContext
from qcore.errors import ConvergenceError, PoleError

CONSECUTIVE_SMALL = 3


def sum_series(terms: Iterator, ctx: QContext, consecutive_small: int = CONSECUTIVE_SMALL):
    """
    Add terms until |term| < tol * |partial| holds for `consecutive_small` terms in a row.

    Works for scalars and for numpy arrays (the rule must then hold elementwise).

    Raises:
        ConvergenceError: the rule is not met within ctx.max_terms terms
    """
    tol = ctx.default_tol
    partial = None
    run = 0
    for count, term in enumerate(terms, start=1):
        partial = term if partial is None else partial + term
        small = np.abs(term) <= tol * np.abs(partial)
        if np.all(small):
            run += 1
            if run >= consecutive_small:
                return partial
        else:
            run = 0
        if count >= ctx.max_terms:
            break
    raise ConvergenceError(
        f"series did not meet the stopping rule within {ctx.max_terms} terms",
        terms=ctx.max_terms,
    )


def q_hypergeom(upper: Sequence[float], lower: Sequence[float], z: float, ctx: QContext) -> float:
    """
    Basic hypergeometric series r_phi_s(upper; lower; q, z).

    Business Logic:
    - term k is prod (a_i; q)_k / prod (b_j; q)_k / (q; q)_k
      * ((-1)^k q^binom(k, 2))^(1 + s - r) * z^k
    - terms are generated by their ratio, so only one Pochhammer factor per
      parameter is formed per step
    - float arithmetic; an exact context is read through its float q

    Raises:
        PoleError: a lower parameter hits q^(-m) inside the summation range
        ConvergenceError: stopping rule not met within max_terms
    """
    ctx = ctx.floating()
    q = ctx.q_float
    upper = [float(a) for a in upper]
    lower = [float(b) for b in lower]
    z = float(z)
    excess = 1 + len(lower) - len(upper)

    if z == 0.0:
        return 1.0

    def terms() -> Iterable[float]:
        term = 1.0
        k = 0
        while True:
            yield term
            qk = q ** k
            numerator = 1.0
            for a in upper:
                numerator *= 1.0 - a * qk
            denominator = 1.0 - q * qk
            for b in lower:
                factor = 1.0 - b * qk
                if abs(factor) < ctx.default_tol:
                    raise PoleError(f"lower parameter {b} produces a vanishing factor at k={k}")
                denominator *= factor
            term *= numerator / denominator * z * ((-qk) ** excess)
            k += 1

    return float(sum_series(terms(), ctx))
