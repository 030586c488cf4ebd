"""
Jackson q-integrals: finite intervals and improper sums over the lattice {q^k / A}.
Improper sums scan both tails outward from k = 0 in numpy chunks and stop,
diverge or give up according to a LatticeSumPlan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

import config
from qcore.context import QContext
from qcore.errors import ConvergenceError, DivergenceError, DomainError
from qspecial.hypergeometric import CONSECUTIVE_SMALL

CHUNK = 64
DIVERGENCE_GUARD = 5
# growth ratios equal up to rounding count as non-decreasing
RATIO_SLACK = 1e-9

# A kernel maps an integer index array k to kernel values at the nodes q^k / A.
IndexKernel = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LatticeSumPlan:
    """
    Lattice {q^k / A : k_min <= k <= k_max} plus the stopping and divergence policy.

    Raises:
        DomainError: k_min > 0, k_max < 0, or non-positive scale/tol/counts
    """

    scale: float = 1.0
    k_min: int = config.K_WINDOW[0]
    k_max: int = config.K_WINDOW[1]
    tol: float = config.DEFAULT_TOL
    consecutive_small: int = CONSECUTIVE_SMALL
    divergence_guard: int = DIVERGENCE_GUARD

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError(f"lattice scale must be positive, got {self.scale}")
        if not self.k_min <= 0 <= self.k_max:
            raise DomainError(f"index window must contain 0, got [{self.k_min}, {self.k_max}]")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        if self.consecutive_small < 1 or self.divergence_guard < 1:
            raise DomainError("consecutive_small and divergence_guard must be >= 1")

    def with_overrides(self, **overrides) -> LatticeSumPlan:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class LatticeSumResult:
    value: float
    k_lo: int
    k_hi: int
    terms: int


def _evaluate(f: Callable, nodes: np.ndarray) -> np.ndarray:
    """Call f on a node array, falling back to elementwise calls for scalar-only f."""
    try:
        values = np.asarray(f(nodes), dtype=float)
        if values.shape == nodes.shape:
            return values
        if values.ndim == 0:
            return np.full(nodes.shape, float(values))
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(x))) for x in nodes])


class _TailScan:
    """Running state for one tail of a bilateral sum."""

    def __init__(self, plan: LatticeSumPlan, tail: str, partial: float):
        self.plan = plan
        self.tail = tail
        self.partial = partial
        self.terms = []
        self.small_run = 0
        self.growth_run = 0
        self.previous = None
        self.previous_ratio = None

    def push(self, term: float, axis: str) -> bool:
        """Accept one term; return True once the stopping rule is met."""
        if not math.isfinite(term):
            raise DivergenceError(f"non-finite lattice term {term!r}", axis=axis, tail=self.tail)

        magnitude = abs(term)
        if self.previous is not None and magnitude > self.previous and self.previous > 0:
            ratio = magnitude / self.previous
            growing = magnitude > abs(self.partial)
            if growing and (self.previous_ratio is None or ratio >= self.previous_ratio * (1.0 - RATIO_SLACK)):
                self.growth_run += 1
            else:
                self.growth_run = 0
            self.previous_ratio = ratio
        else:
            self.growth_run = 0
            self.previous_ratio = None
        if self.growth_run >= self.plan.divergence_guard:
            raise DivergenceError(
                f"lattice terms grow for {self.growth_run} consecutive indices "
                f"(last |term|={magnitude:.3e})",
                axis=axis,
                tail=self.tail,
            )
        self.previous = magnitude

        self.terms.append(term)
        self.partial += term
        if magnitude <= self.plan.tol * abs(self.partial):
            self.small_run += 1
        else:
            self.small_run = 0
        return self.small_run >= self.plan.consecutive_small


def lattice_sum(
    f: Callable,
    plan: LatticeSumPlan,
    ctx: QContext,
    kernel: Optional[IndexKernel] = None,
    axis: str = "x",
) -> LatticeSumResult:
    """
    (1-q) * sum_k (q^k / A) f(q^k / A) [* kernel(k)] over the plan's window.

    Business Logic:
    - the small-x tail (k = 0, 1, ...) is scanned first, then the large-x tail
      (k = -1, -2, ...), each until |term| <= tol * |partial| for
      consecutive_small terms in a row
    - a large tail whose terms keep growing (each term larger than the last,
      larger than the running sum, with non-decreasing growth ratio) for
      divergence_guard indices is a divergence; so is any non-finite term
    - the final value is math.fsum over the accepted terms in index order, so
      the result does not depend on chunking

    Raises:
        DivergenceError: a tail grows, naming the axis and the tail
        ConvergenceError: a tail exhausts the window without meeting the rule
    """
    ctx = ctx.floating()
    q = ctx.q_float
    weight = 1.0 - q

    def scan(tail: str, start: int, stop: int, step: int, partial: float) -> _TailScan:
        state = _TailScan(plan, tail, partial)
        k = start
        while (step > 0 and k <= stop) or (step < 0 and k >= stop):
            end = min(k + CHUNK - 1, stop) if step > 0 else max(k - CHUNK + 1, stop)
            ks = np.arange(k, end + step, step, dtype=np.int64)
            nodes = q ** ks.astype(float) / plan.scale
            with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
                if kernel is None:
                    values = _evaluate(f, nodes)
                else:
                    # f is not evaluated where the kernel vanishes exactly
                    kernel_values = kernel(ks)
                    alive = kernel_values != 0.0
                    values = np.zeros_like(nodes)
                    if np.any(alive):
                        values[alive] = _evaluate(f, nodes[alive]) * kernel_values[alive]
                chunk_terms = weight * nodes * values
            for term in chunk_terms:
                if state.push(float(term), axis):
                    return state
            k = end + step
        raise ConvergenceError(
            f"{tail} tail did not meet the stopping rule inside the window "
            f"[{plan.k_min}, {plan.k_max}] (axis={axis})",
            terms=len(state.terms),
            tail=tail,
        )

    small = scan("small-x", 0, plan.k_max, 1, 0.0)
    if plan.k_min < 0:
        large = scan("large-x", -1, plan.k_min, -1, small.partial)
        large_terms = large.terms
    else:
        large_terms = []

    ordered = list(reversed(large_terms)) + small.terms
    return LatticeSumResult(
        value=math.fsum(ordered),
        k_lo=-len(large_terms),
        k_hi=len(small.terms) - 1,
        terms=len(ordered),
    )


def jackson_integral_improper(
    f: Callable,
    plan: LatticeSumPlan,
    ctx: QContext,
    kernel: Optional[IndexKernel] = None,
) -> float:
    """Improper Jackson integral over (0, inf/A); see lattice_sum."""
    return lattice_sum(f, plan, ctx, kernel=kernel).value


def jackson_integral_improper_2d(
    f: Callable,
    plan_x: LatticeSumPlan,
    plan_y: LatticeSumPlan,
    ctx: QContext,
    kernel_x: Optional[IndexKernel] = None,
    kernel_y: Optional[IndexKernel] = None,
) -> float:
    """
    Tensor-product improper sum, iterated: the inner y-sum for each x node,
    then the outer x-sum of those values. Divergence is attributed to its axis.
    """

    def inner(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty_like(xs)
        for i, x in enumerate(xs):
            out[i] = lattice_sum(
                lambda ys, x=x: f(np.full_like(ys, x), ys), plan_y, ctx, kernel=kernel_y, axis="y"
            ).value
        return out

    return lattice_sum(inner, plan_x, ctx, kernel=kernel_x, axis="x").value


def jackson_integral_finite(f: Callable, a, b, ctx: QContext, tol: Optional[float] = None) -> float:
    """
    Jackson integral over [a, b] as the difference of two integrals from 0.

    Business Logic:
    - integral from 0 to z is z (1-q) sum_k q^k f(z q^k), stopped when
      |term| <= tol * |partial| for three terms in a row
    - a == b gives 0 without evaluating f

    Raises:
        DomainError: negative bound
        ConvergenceError: stopping rule not met within ctx.max_terms
    """
    if a < 0 or b < 0:
        raise DomainError(f"Jackson integral bounds must be >= 0, got [{a}, {b}]")
    if a == b:
        return 0.0
    tol = ctx.default_tol if tol is None else tol
    return _integral_from_zero(f, float(b), ctx, tol) - _integral_from_zero(f, float(a), ctx, tol)


def _integral_from_zero(f: Callable, z: float, ctx: QContext, tol: float) -> float:
    if z == 0.0:
        return 0.0
    q = ctx.q_float
    terms = []
    partial = 0.0
    run = 0
    point = z
    for _ in range(ctx.max_terms):
        term = (1.0 - q) * point * float(f(point))
        terms.append(term)
        partial += term
        if abs(term) <= tol * abs(partial):
            run += 1
            if run >= CONSECUTIVE_SMALL:
                return math.fsum(terms)
        else:
            run = 0
        point *= q
    raise ConvergenceError(
        f"Jackson integral on [0, {z}] did not converge within {ctx.max_terms} terms",
        terms=ctx.max_terms,
    )
