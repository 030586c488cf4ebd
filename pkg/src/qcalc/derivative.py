"""
Lattice functions and q-derivatives (ordinary, iterated and partial).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple

import numpy as np

from qcore.context import QContext
from qcore.errors import DomainError, LimitError


@dataclass(frozen=True)
class LatticeFunction1D:
    """A deterministic function of one positive variable, optionally tagged for catalog routing."""

    evaluator: Callable[[Any], Any]
    descriptor: Optional[Any] = None

    def __call__(self, x):
        return self.evaluator(x)


@dataclass(frozen=True)
class LatticeFunction2D:
    """A deterministic function of (x, y), optionally tagged for catalog routing."""

    evaluator: Callable[[Any, Any], Any]
    descriptor: Optional[Any] = None

    def __call__(self, x, y):
        return self.evaluator(x, y)


def _q(ctx: QContext, x):
    # keep Fractions exact when both q and the point are exact
    if ctx.is_exact and not isinstance(x, (float, np.ndarray)):
        return ctx.q
    return ctx.q_float


def _is_zero_point(x) -> bool:
    return np.ndim(x) == 0 and x == 0


def _difference_quotient(f: Callable, x, order: int, ctx: QContext):
    q = _q(ctx, x)
    if order == 1:
        return (f(x) - f(q * x)) / ((1 - q) * x)

    def lower(t):
        return _difference_quotient(f, t, order - 1, ctx)

    return (lower(x) - lower(q * x)) / ((1 - q) * x)


def q_derivative(f: Callable, x, order: int, ctx: QContext):
    """
    Jackson q-derivative D_q^order f at x.

    Business Logic:
    - order 1 is the quotient (f(x) - f(qx)) / ((1-q) x); higher orders iterate it
    - at x = 0 the value is the limit of the quotient along x = q^k, k -> inf,
      taken where successive quotients agree to sqrt(default_tol)
    - numpy arrays of nonzero points are differentiated elementwise

    Args:
        f: callable or LatticeFunction1D
        x: evaluation point
        order: positive integer
        ctx: q and tolerances

    Raises:
        DomainError: order < 1
        LimitError: the lattice limit at 0 does not settle within ctx.max_terms points
    """
    if order < 1:
        raise DomainError(f"q-derivative order must be >= 1, got {order}")
    if _is_zero_point(x):
        return _limit_at_zero(f, order, ctx)
    return _difference_quotient(f, x, order, ctx)


def _limit_at_zero(f: Callable, order: int, ctx: QContext):
    q = _q(ctx, 0)
    tol = ctx.default_tol ** 0.5
    point = q ** 0
    previous = None
    for _ in range(ctx.max_terms):
        value = _difference_quotient(f, point, order, ctx)
        if not np.isfinite(float(value)):
            raise LimitError(f"quotient became non-finite while probing x -> 0 (x={float(point):.3e})")
        if previous is not None and abs(value - previous) <= tol * max(1.0, abs(float(value))):
            return value
        previous = value
        point = point * q
    raise LimitError(f"q-derivative limit at 0 did not settle within {ctx.max_terms} lattice points")


def q_partial(
    f: Callable,
    var: str,
    point: Tuple[Any, Any],
    orders: Tuple[int, int],
    ctx: QContext,
):
    """
    Iterated partial q-derivative (D_x)^i (D_y)^j f at point, orders = (i, j).

    var names the variable differentiated first ('x' or 'y'); the two orders
    commute for the difference-quotient form.
    """
    if var not in ("x", "y"):
        raise DomainError(f"var must be 'x' or 'y', got {var!r}")
    i, j = orders
    if i < 0 or j < 0:
        raise DomainError(f"partial orders must be non-negative, got {orders}")

    g = f
    steps = (("x", i), ("y", j)) if var == "x" else (("y", j), ("x", i))
    for axis, order in steps:
        if order:
            g = _partial(g, axis, order, ctx)
    return g(*point)


def _partial(f: Callable, axis: str, order: int, ctx: QContext) -> Callable:
    if axis == "x":
        return lambda x, y: q_derivative(lambda t: f(t, y), x, order, ctx)
    return lambda x, y: q_derivative(lambda t: f(x, t), y, order, ctx)
