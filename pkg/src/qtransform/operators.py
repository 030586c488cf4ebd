"""
Operator theorems of the double transforms: images of partial q-derivatives
(assembled symbolically from boundary traces) and of multiplication by x^m y^n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

import sympy

from qcalc.derivative import LatticeFunction2D, q_partial
from qcore.combinatorics import binom2, q_factorial
from qcore.context import QContext, is_integral
from qcore.errors import DomainError, IncompleteDataError
from qcore.qpoly import QPoly2
from qspecial.exponential import Family
from qsymbolic.rsexpr import R, S, RSExpr, SExpr, to_sympy
from qtransform.descriptors import (
    Atom1D,
    AtomTag,
    Descriptor,
    ExpQAdd,
    LinearCombo,
    Monomial,
    QAddPower,
    Separable,
    SeriesQAdd,
    polynomial_descriptor,
)
from qtransform.double import TransformKind
from qtransform.single import Side, qlap1d_catalog, qlap1d_derivative_image

_SPEC_PATTERN = re.compile(r"^(?:dx(?P<x>\d*))?(?:dy(?P<y>\d*))?$")


@dataclass(frozen=True)
class DerivativeSpec:
    """Orders (i, j) of the partial q-derivative D_x^i D_y^j."""

    x_order: int = 0
    y_order: int = 0

    def __post_init__(self):
        if self.x_order < 0 or self.y_order < 0 or self.x_order + self.y_order == 0:
            raise DomainError(f"derivative orders must be non-negative and not both zero, got {self.orders}")

    @classmethod
    def parse(cls, text: str) -> DerivativeSpec:
        """'dx', 'dy', 'dxdy', 'dxx', 'dyy', 'dx3', 'dy2', 'dx2dy1'."""
        token = text.strip().lower().replace("dxx", "dx2").replace("dyy", "dy2")
        match = _SPEC_PATTERN.match(token)
        if not match or token == "":
            raise DomainError(f"unknown derivative spec {text!r}")
        x, y = match.group("x"), match.group("y")
        x_order = 0 if x is None else int(x or 1)
        y_order = 0 if y is None else int(y or 1)
        return cls(x_order, y_order)

    @property
    def orders(self) -> Tuple[int, int]:
        return self.x_order, self.y_order

    @property
    def label(self) -> str:
        def part(var, order):
            if order == 0:
                return ""
            return f"d{var}" if order == 1 else f"d{var}{order}"

        return part("x", self.x_order) + part("y", self.y_order)


@dataclass(frozen=True)
class BoundaryData:
    """
    Transforms of the boundary traces a derivative image needs.

    x_traces[k] is the image (in s) of D_x^k f(0, y); y_traces[k] is the image
    (written in s, placed at r on use) of D_y^k f(x, 0); corner[(i, j)] is
    D_x^i D_y^j f(0, 0).
    """

    x_traces: Mapping[int, SExpr] = field(default_factory=dict)
    y_traces: Mapping[int, SExpr] = field(default_factory=dict)
    corner: Mapping[Tuple[int, int], object] = field(default_factory=dict)

    def x_trace(self, k: int) -> SExpr:
        if k not in self.x_traces:
            raise IncompleteDataError(f"missing transform of the trace D_x^{k} f(0, y)")
        return self.x_traces[k]

    def y_trace(self, k: int) -> SExpr:
        if k not in self.y_traces:
            raise IncompleteDataError(f"missing transform of the trace D_y^{k} f(x, 0)")
        return self.y_traces[k]

    def corner_value(self, i: int, j: int):
        if (i, j) not in self.corner:
            raise IncompleteDataError(f"missing corner value D_x^{i} D_y^{j} f(0, 0)")
        return self.corner[(i, j)]


# ---------------------------------------------------------------------------
# boundary traces of polynomial descriptors
# ---------------------------------------------------------------------------


def _integral_atom_exponent(atom: Atom1D) -> Optional[int]:
    if atom.tag is AtomTag.MONOMIAL and is_integral(atom.parameter) and atom.parameter >= 0:
        return int(atom.parameter)
    return None


def descriptor_polynomial(descriptor: Descriptor, ctx: QContext) -> QPoly2:
    """
    The descriptor as a QPoly2, for the descriptors that are polynomials.

    Raises:
        DomainError: the descriptor is not a polynomial
    """
    one = ctx.coerce(1)
    if isinstance(descriptor, Monomial):
        if is_integral(descriptor.alpha) and is_integral(descriptor.beta):
            return QPoly2.monomial(int(descriptor.alpha), int(descriptor.beta), one)
    elif isinstance(descriptor, Separable):
        factors = []
        for atom, var in ((descriptor.gx, "x"), (descriptor.hy, "y")):
            if atom.tag is AtomTag.CONSTANT:
                factors.append(QPoly2.constant(ctx.coerce(atom.parameter)))
                continue
            exponent = _integral_atom_exponent(atom)
            if exponent is None:
                break
            factors.append(QPoly2.monomial(exponent, 0, one) if var == "x" else QPoly2.monomial(0, exponent, one))
        else:
            return factors[0] * factors[1]
    elif isinstance(descriptor, (QAddPower, SeriesQAdd)):
        return descriptor.polynomial(ctx)
    elif isinstance(descriptor, LinearCombo):
        total = QPoly2()
        for c, d in descriptor.terms:
            total = total + descriptor_polynomial(d, ctx) * ctx.coerce(c)
        return total
    raise DomainError(f"{descriptor} is not a polynomial; supply its boundary traces explicitly")


def _monomial_trace(coefficients: Dict[int, object], side: Side, ctx: QContext) -> SExpr:
    total = SExpr.zero()
    for power, c in sorted(coefficients.items()):
        if c == 0:
            continue
        total = total + qlap1d_catalog(Atom1D.monomial(power), side, ctx).scale(c)
    return total


def boundary_from_descriptor(
    descriptor: Descriptor,
    kind: TransformKind,
    ctx: QContext,
    max_order: int = 3,
) -> BoundaryData:
    """
    Exact boundary data of a polynomial descriptor up to max_order.

    Business Logic:
    - D_q^k x^i vanishes at x = 0 unless i = k, where it is [k]_q!, so
      D_x^k f(0, y) = [k]_q! sum_j c_kj y^j
    - traces are transformed with the kind of the remaining axis
    """
    kind = TransformKind.of(kind)
    poly = descriptor_polynomial(descriptor, ctx)
    coefficients = poly.coefficients
    x_traces, y_traces, corner = {}, {}, {}
    for k in range(max_order + 1):
        factorial = q_factorial(k, ctx)
        along_y = {j: factorial * c for (i, j), c in coefficients.items() if i == k}
        along_x = {i: factorial * c for (i, j), c in coefficients.items() if j == k}
        x_traces[k] = _monomial_trace(along_y, kind.y_side, ctx)
        y_traces[k] = _monomial_trace(along_x, kind.x_side, ctx)
        for j in range(max_order + 1):
            corner[(k, j)] = factorial * q_factorial(j, ctx) * poly.coefficient(k, j)
    return BoundaryData(x_traces, y_traces, corner)


def exponential_boundary(a, b, kind: TransformKind, ctx: QContext, max_order: int = 3) -> BoundaryData:
    """Boundary data of e_q(ax) e_q(by): D_x^k D_y^l f = a^k b^l f."""
    kind = TransformKind.of(kind)
    along_y = qlap1d_catalog(Atom1D.exp_small(b), kind.y_side, ctx)
    along_x = qlap1d_catalog(Atom1D.exp_small(a), kind.x_side, ctx)
    a, b = Fraction(a), Fraction(b)
    x_traces = {k: along_y.scale(a ** k) for k in range(max_order + 1)}
    y_traces = {l: along_x.scale(b ** l) for l in range(max_order + 1)}
    corner = {(k, l): a ** k * b ** l for k in range(max_order + 1) for l in range(max_order + 1)}
    return BoundaryData(x_traces, y_traces, corner)


# ---------------------------------------------------------------------------
# derivative images
# ---------------------------------------------------------------------------


def _axis_rule(image: RSExpr, var: sympy.Symbol, side: Side, n: int, traces, q: sympy.Expr) -> RSExpr:
    """One axis of the derivative theorem; traces[k] are expressions in the other variable."""
    if n == 0:
        return image
    name = "r" if var is R else "s"
    if side is Side.FIRST:
        result = image * RSExpr.of(var ** n, f"{name}^{n}")
    else:
        shifted = image.substitute({var: var * q ** (-n)}, label=f"{name}↦{name}q^-{n}")
        result = shifted * RSExpr.of(var ** n * q ** (-binom2(n + 1)), f"{name}^{n} q^-{binom2(n + 1)}")
    for k in range(n):
        weight = 1 if side is Side.FIRST else q ** (-binom2(n - k))
        result = result - RSExpr.of(var ** (n - 1 - k) * weight * traces[k], f"trace term k={k}")
    return result


def derivative_image(
    kind: TransformKind,
    spec: Union[DerivativeSpec, str],
    image: RSExpr,
    boundary: Optional[BoundaryData],
    ctx: QContext,
) -> RSExpr:
    """
    Image of D_x^i D_y^j f assembled from the image of f and boundary traces.

    Business Logic:
    - each axis follows its kind's one-variable rule: first kind
      r^n F - sum_k r^(n-1-k) T_k; second kind r^n q^(-binom(n+1, 2)) F(r q^(-n), s)
      - sum_k r^(n-1-k) q^(-binom(n-k, 2)) T_k
    - the y rule is applied first (traces D_y^l f(x, 0)), then the x rule, whose
      traces D_x^k D_y^j f(0, y) come from the one-variable derivative rule
      applied to the x traces with corner values as initial data
    - K1 dxdy therefore reads rsF - r T[f(x,0)](r) - s T[f(0,y)](s) + f(0,0)

    Raises:
        IncompleteDataError: a needed trace or corner value is missing
    """
    kind = TransformKind.of(kind)
    spec = DerivativeSpec.parse(spec) if isinstance(spec, str) else spec
    boundary = boundary or BoundaryData()
    q = to_sympy(ctx.q)
    i, j = spec.orders

    y_traces = [boundary.y_trace(l).at(R) for l in range(j)]
    result = _axis_rule(image, S, kind.y_side, j, y_traces, q)

    x_traces = []
    for k in range(i):
        trace = boundary.x_trace(k)
        if j:
            initial = [boundary.corner_value(k, l) for l in range(j)]
            trace = qlap1d_derivative_image(trace, kind.y_side, j, initial, ctx)
        x_traces.append(trace.at(S))
    return _axis_rule(result, R, kind.x_side, i, x_traces, q)


def partial_descriptor(descriptor: Descriptor, spec: Union[DerivativeSpec, str], ctx: QContext) -> Descriptor:
    """
    D_x^i D_y^j f in closed descriptor form, for polynomials and q-exponentials of a q-sum.

    Business Logic:
    - polynomials are differentiated coefficient-wise and returned as monomial sums
    - D_q e_q(at) = a e_q(at), so e_q(ax ⊕_q by) picks up a^i b^j
    - D_q E_q(at) = a E_q(aqt), so E_q(ax ⊞_q by) becomes
      a^i b^j q^(binom(i, 2) + binom(j, 2)) E_q(a q^i x ⊞_q b q^j y)

    Raises:
        DomainError: the descriptor has no closed-form derivative here
    """
    spec = DerivativeSpec.parse(spec) if isinstance(spec, str) else spec
    i, j = spec.orders
    if isinstance(descriptor, ExpQAdd):
        a, b = descriptor.a, descriptor.b
        weight = a ** i * b ** j
        if descriptor.family is Family.SMALL:
            return LinearCombo(((weight, descriptor),))
        weight = weight * ctx.power(binom2(i) + binom2(j))
        return LinearCombo(((weight, ExpQAdd(a * ctx.power(i), b * ctx.power(j), Family.BIG)),))
    poly = descriptor_polynomial(descriptor, ctx)
    return polynomial_descriptor(poly.q_derivative(i, j, ctx))


def partial_lattice_function(f, spec: Union[DerivativeSpec, str], ctx: QContext) -> LatticeFunction2D:
    """D_x^i D_y^j f as a pointwise function, via difference quotients."""
    spec = DerivativeSpec.parse(spec) if isinstance(spec, str) else spec
    fctx = ctx.floating()
    evaluator = f.as_lattice_function(fctx) if isinstance(f, Descriptor) else f
    return LatticeFunction2D(lambda x, y: q_partial(evaluator, "y", (x, y), spec.orders, fctx))


# ---------------------------------------------------------------------------
# multiplication images
# ---------------------------------------------------------------------------


def multiplication_image(
    kind: TransformKind,
    m: int,
    n: int,
    image: Union[RSExpr, Callable],
    ctx: QContext,
) -> Callable:
    """
    Evaluator of the image of x^m y^n f(x, y) from the image F of f.

    Business Logic:
    - first-kind axes: (-1)^m q^binom(m, 2) times the m-th q-derivative in r of
      F(q^(-m) r, .)
    - second-kind axes: (-1)^m times the m-th q-derivative in r of F, unshifted
    - the q-derivatives are lattice difference quotients of F; exact when F is an
      RSExpr evaluated at exact points in an exact context
    """
    kind = TransformKind.of(kind)
    if m < 0 or n < 0:
        raise DomainError(f"multiplication powers must be non-negative, got ({m}, {n})")
    evaluate = image.evaluate if isinstance(image, RSExpr) else image

    def factors(use: QContext):
        shift_r = use.power(-m) if kind.x_side is Side.FIRST else 1
        shift_s = use.power(-n) if kind.y_side is Side.FIRST else 1
        prefactor = (-1) ** (m + n)
        if kind.x_side is Side.FIRST:
            prefactor *= use.power(binom2(m))
        if kind.y_side is Side.FIRST:
            prefactor *= use.power(binom2(n))
        return shift_r, shift_s, prefactor

    def evaluator(r, s):
        exact = ctx.is_exact and not isinstance(r, float) and not isinstance(s, float)
        use = ctx if exact else ctx.floating()
        if exact:
            r, s = Fraction(r), Fraction(s)
        shift_r, shift_s, prefactor = factors(use)
        shifted = lambda u, v: evaluate(u * shift_r, v * shift_s)  # noqa: E731
        if m == 0 and n == 0:
            return shifted(r, s)
        return prefactor * q_partial(shifted, "x", (r, s), (m, n), use)

    return evaluator
