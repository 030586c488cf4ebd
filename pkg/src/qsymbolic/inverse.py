"""
Inverse lookup: map a closed-form image back to the descriptor it is the catalog
image of. Candidates come from the shape of the denominator; every candidate is
confirmed by exact comparison with its forward image before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import sympy

from qcore.context import QContext
from qcore.errors import CatalogMissError, NoMatchError
from qcore.qpoly import AdditionKind
from qspecial.exponential import Family, TrigSelector
from qsymbolic.algebra import Image, as_expression, separable_decomposition, _apart
from qsymbolic.rsexpr import R, S, RSExpr, to_sympy
from qtransform.descriptors import (
    Atom1D,
    AtomTag,
    Descriptor,
    ExpQAdd,
    LinearCombo,
    Monomial,
    QAddPower,
    Separable,
    TrigQAdd,
)
from qtransform.double import TransformKind, qlap2d_catalog
from qtransform.single import Side, qlap1d_catalog

_POWER_LAW = {
    TransformKind.K1: AdditionKind.WARD_ADD,
    TransformKind.K2: AdditionKind.COADD,
    TransformKind.K3: AdditionKind.QPOW_ADD,
    TransformKind.K4: AdditionKind.QPOW_ADD,
}

_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class AxisShape:
    """What the denominator says about one axis: const, exp, pow, circ or hyp."""

    tag: str
    rate: sympy.Expr = sympy.Integer(0)
    power: int = 0


def _plain(value: sympy.Expr):
    value = sympy.nsimplify(value) if value.is_Float else value
    if value.is_Integer:
        return int(value)
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return value


def _axis_denominator(denominator: sympy.Expr, var: sympy.Symbol) -> sympy.Expr:
    _, factors = sympy.factor_list(denominator)
    return sympy.Mul(*(f ** m for f, m in factors if f.has(var)))


def axis_shape(denominator: sympy.Expr, var: sympy.Symbol, side: Side, q: sympy.Expr) -> Optional[AxisShape]:
    """Classify the var-dependent part of a denominator by its roots."""
    part = _axis_denominator(denominator, var)
    if not part.has(var) or part.has(S if var == R else R):
        return None
    try:
        poly = sympy.Poly(part, var)
    except sympy.PolynomialError:
        return None
    roots = sympy.roots(poly)
    if sum(roots.values()) != poly.degree():
        return None
    scale = 1 if side is Side.FIRST else q

    if list(roots) == [0]:
        multiplicity = roots[0]
        return AxisShape("const") if multiplicity == 1 else AxisShape("pow", power=multiplicity - 1)
    if any(m != 1 for m in roots.values()):
        return None
    values = list(roots)
    if len(values) == 1:
        return AxisShape("exp", sympy.simplify(scale * values[0]))
    if len(values) == 2 and sympy.simplify(values[0] + values[1]) == 0:
        root = values[0]
        if sympy.re(root) == 0:
            return AxisShape("circ", sympy.simplify(scale * sympy.Abs(sympy.im(root))))
        if root.is_real:
            return AxisShape("hyp", sympy.simplify(scale * sympy.Abs(root)))
    return None


def _atom_candidates(shape: AxisShape, side: Side) -> List[Atom1D]:
    rate = _plain(shape.rate)
    if shape.tag == "const":
        return [Atom1D.constant(1)]
    if shape.tag == "pow":
        return [Atom1D.monomial(shape.power)]
    if shape.tag == "exp":
        return [Atom1D.exp_small(rate) if side is Side.FIRST else Atom1D.exp_big(rate)]
    names = ("cos", "sin") if shape.tag == "circ" else ("cosh", "sinh")
    return [Atom1D.trig(TrigSelector.of(name, side.family), rate) for name in names]


def _monomial_exponents(expr: sympy.Expr) -> Optional[Tuple[sympy.Expr, sympy.Expr]]:
    _, rest = expr.as_independent(R, S, as_Add=False)
    powers = sympy.powsimp(rest).as_powers_dict()
    if set(powers) != {R, S}:
        return None
    p, m = powers[R], powers[S]
    if not (p.is_number and m.is_number and p < 0 and m < 0):
        return None
    return -p - 1, -m - 1


def _real_roots(value: sympy.Expr, n: int) -> List[sympy.Expr]:
    if value == 0:
        return [sympy.Integer(0)]
    if value.free_symbols or not value.is_real:
        return []
    magnitude = sympy.root(sympy.Abs(value), n)
    if n % 2:
        return [magnitude if value > 0 else -magnitude]
    return [magnitude, -magnitude] if value > 0 else []


@dataclass(frozen=True)
class CatalogIndex:
    """
    Forward and backward catalog for one transform kind.

    forward is qlap2d_catalog; backward recognises an image by template and
    confirms it exactly, so the round trip backward(forward(d)) returns d for
    canonical descriptors.
    """

    kind: TransformKind
    ctx: QContext

    @property
    def q(self) -> sympy.Expr:
        return to_sympy(self.ctx.exact().q)

    def forward(self, descriptor: Descriptor) -> RSExpr:
        return qlap2d_catalog(descriptor, self.kind, self.ctx)

    def scale_against(self, expr: sympy.Expr, candidate: Descriptor) -> Optional[sympy.Expr]:
        """c with expr = c * forward(candidate), or None."""
        try:
            image = self.forward(candidate).total
        except (CatalogMissError, ValueError):
            return None
        if image == 0:
            return None
        ratio = sympy.cancel(sympy.together(expr / image))
        if ratio.has(R, S) or ratio == 0:
            return None
        return ratio

    # -- templates ----------------------------------------------------------

    def _templates(self, expr: sympy.Expr) -> Iterator[Descriptor]:
        exponents = _monomial_exponents(expr)
        if exponents is not None:
            yield Monomial(_plain(exponents[0]), _plain(exponents[1]))
            return

        _, denominator = sympy.fraction(expr)
        sx = axis_shape(denominator, R, self.kind.x_side, self.q)
        sy = axis_shape(denominator, S, self.kind.y_side, self.q)
        if sx is None or sy is None:
            return

        family = {TransformKind.K1: Family.SMALL, TransformKind.K2: Family.BIG}.get(self.kind)
        exp_like = ("exp", "const")
        if family and sx.tag in exp_like and sy.tag in exp_like and "exp" in (sx.tag, sy.tag):
            yield ExpQAdd(_plain(sx.rate), _plain(sy.rate), family)
        if family and sx.tag == sy.tag and sx.tag in ("circ", "hyp"):
            names = ("cos", "sin") if sx.tag == "circ" else ("cosh", "sinh")
            for name in names:
                selector = TrigSelector.of(name, family)
                for sa, sb in _SIGNS:
                    yield TrigQAdd(_plain(sa * sx.rate), _plain(sb * sy.rate), selector)
        if sx.tag == sy.tag == "pow":
            yield from self._qaddpower_candidates(expr, sx.power)
        for gx in _atom_candidates(sx, self.kind.x_side):
            for hy in _atom_candidates(sy, self.kind.y_side):
                yield Separable(gx, hy)

    def _qaddpower_candidates(self, expr: sympy.Expr, n: int) -> Iterator[QAddPower]:
        law = _POWER_LAW[self.kind]
        lift = R ** (n + 1) * S ** (n + 1)
        try:
            given = sympy.Poly(sympy.cancel(expr * lift), R, S)
            unit = sympy.Poly(sympy.cancel(self.forward(QAddPower(1, 1, n, law)).total * lift), R, S)
        except sympy.PolynomialError:
            return
        # x^n pairs with s^n after lifting, y^n with r^n
        a_power = given.coeff_monomial(S ** n) / unit.coeff_monomial(S ** n)
        b_power = given.coeff_monomial(R ** n) / unit.coeff_monomial(R ** n)
        for a in _real_roots(sympy.nsimplify(a_power), n):
            for b in _real_roots(sympy.nsimplify(b_power), n):
                yield QAddPower(_plain(a), _plain(b), n, law)

    # -- lookup -------------------------------------------------------------

    def backward(self, image: Image) -> Descriptor:
        """
        The descriptor whose image this is.

        Business Logic:
        - templates are tried in order: monomial, exponential and trig of a
          q-sum, q-addition powers, then products of one-axis atoms
        - a template matches when the image is a constant multiple of its
          forward image; the multiple becomes a LinearCombo coefficient
        - otherwise the image is split into products of one-variable factors
          and each axis is inverted atom by atom

        Raises:
            NoMatchError: some summand matches nothing; its atoms are listed
        """
        expr = sympy.cancel(sympy.together(as_expression(image)))
        if expr == 0:
            return LinearCombo(())

        for candidate in self._templates(expr):
            ratio = self.scale_against(expr, candidate)
            if ratio is not None:
                return candidate if ratio == 1 else LinearCombo(((_plain(ratio), candidate),))

        return self._separable(expr)

    def _separable(self, expr: sympy.Expr) -> Descriptor:
        pieces = separable_decomposition(expr)
        if pieces is None:
            raise NoMatchError(
                "image does not split into products of one-variable factors",
                residual=tuple(str(t) for t in sympy.Add.make_args(_apart(expr, S))),
            )
        combined = {}
        unmatched = []
        for x_part, y_part in pieces:
            xs = invert_axis(x_part, R, self.kind.x_side, self.ctx)
            ys = invert_axis(y_part, S, self.kind.y_side, self.ctx)
            if xs is None or ys is None:
                unmatched.append(str(x_part * y_part))
                continue
            for cx, gx in xs:
                for cy, hy in ys:
                    descriptor = _product_descriptor(gx, hy)
                    combined[descriptor] = combined.get(descriptor, 0) + cx * cy
        if unmatched:
            raise NoMatchError("no catalog atoms match part of the image", residual=tuple(unmatched))

        terms = tuple(
            (_plain(sympy.nsimplify(c) if isinstance(c, float) else sympy.sympify(c)), d)
            for d, c in combined.items()
            if sympy.simplify(c) != 0
        )
        result = terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else LinearCombo(terms)
        residual = sympy.cancel(sympy.together(expr - self.forward(result).total))
        if residual != 0:
            raise NoMatchError("recognised atoms do not reproduce the image", residual=(str(residual),))
        return result


def _product_descriptor(gx: Atom1D, hy: Atom1D) -> Descriptor:
    def exponent(atom: Atom1D):
        if atom.tag is AtomTag.MONOMIAL:
            return atom.parameter
        if atom.tag is AtomTag.CONSTANT and atom.parameter == 1:
            return 0
        return None

    alpha, beta = exponent(gx), exponent(hy)
    if alpha is not None and beta is not None:
        return Monomial(alpha, beta)
    return Separable(gx, hy)


def invert_axis(
    expr: sympy.Expr,
    var: sympy.Symbol,
    side: Side,
    ctx: QContext,
) -> Optional[List[Tuple[sympy.Expr, Atom1D]]]:
    """
    A one-variable image in var as a combination of catalog atoms, or None.

    Each partial-fraction summand is matched to one atom, or for a quadratic
    denominator to the cos/sin (cosh/sinh) pair with coefficients solved exactly.
    """
    q = to_sympy(ctx.exact().q)
    expr = sympy.cancel(sympy.together(expr))
    if expr == 0:
        return []

    def image(atom: Atom1D) -> sympy.Expr:
        return qlap1d_catalog(atom, side, ctx).at(var)

    _, rest = expr.as_independent(var, as_Add=False)
    powers = sympy.powsimp(rest).as_powers_dict()
    if set(powers) == {var} and powers[var].is_number and powers[var] < 0:
        atom = Atom1D.monomial(_plain(-powers[var] - 1))
        return [(sympy.cancel(expr / image(atom)), atom)]

    found = []
    for term in sympy.Add.make_args(_apart(expr, var)):
        _, denominator = sympy.fraction(sympy.cancel(term))
        shape = axis_shape(denominator, var, side, q)
        if shape is None:
            return None
        candidates = _atom_candidates(shape, side)
        if len(candidates) == 1:
            ratio = sympy.cancel(term / image(candidates[0]))
            if ratio.has(var):
                return None
            found.append((ratio, candidates[0]))
            continue
        c1, c2 = sympy.symbols("c1 c2")
        difference = sympy.cancel(sympy.together(term - c1 * image(candidates[0]) - c2 * image(candidates[1])))
        numerator, _ = sympy.fraction(difference)
        solution = sympy.solve(sympy.Poly(numerator, var).coeffs(), [c1, c2], dict=True)
        if not solution:
            return None
        values = solution[0]
        for symbol, atom in ((c1, candidates[0]), (c2, candidates[1])):
            value = values.get(symbol, 0)
            if value != 0:
                found.append((value, atom))
    return found


def inverse_catalog(image: Image, kind: TransformKind, ctx: QContext) -> Descriptor:
    """Descriptor whose kind-`kind` image is `image`; see CatalogIndex.backward."""
    return CatalogIndex(TransformKind.of(kind), ctx).backward(image)


def inverse_catalog_1d(image: Image, kind: TransformKind, ctx: QContext) -> Descriptor:
    """
    Invert a one-variable image F(r) as the image of a function of x alone.

    The y axis carries the constant 1, so the double image is F(r)/s; a lone
    x-atom comes back as Monomial(alpha, 0) or Separable(atom, 1).
    """
    kind = TransformKind.of(kind)
    expr = as_expression(image)
    if expr.has(S) and not expr.has(R):
        expr = expr.subs(S, R)
    xs = invert_axis(expr, R, kind.x_side, ctx)
    if xs is None:
        raise NoMatchError(f"no catalog atoms match the one-variable image {expr}", residual=(str(expr),))
    one = Atom1D.constant(1)
    terms = tuple((_plain(sympy.sympify(c)), _product_descriptor(atom, one)) for c, atom in xs)
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return LinearCombo(terms)
