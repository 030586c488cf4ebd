"""
Equation specifications and solution reports for the q-functional and
q-difference equation solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from qcore.errors import DomainError
from qsymbolic.rsexpr import RSExpr
from qtransform.descriptors import Atom1D, Descriptor


class EquationId(str, Enum):
    CAUCHY_WARD = "cauchy_ward"
    CAUCHY_COADD = "cauchy_coadd"
    ABEL_WARD = "abel_ward"
    ABEL_COADD = "abel_coadd"
    TRANSPORT = "transport"
    TELEGRAPH = "telegraph"
    WAVE = "wave"

    @property
    def is_functional(self) -> bool:
        return self in (
            EquationId.CAUCHY_WARD,
            EquationId.CAUCHY_COADD,
            EquationId.ABEL_WARD,
            EquationId.ABEL_COADD,
        )


@dataclass(frozen=True)
class EquationSpec:
    """
    One equation to solve: its id, scalar parameters and one-variable data.

    f is the initial profile u(x, 0) and g the boundary profile u(0, t) for the
    transport equation, or the initial velocity D_t u(x, 0) for the wave equation.
    """

    id: EquationId
    c: Any = 1
    alpha: Any = 0
    beta: Any = 0
    f: Optional[Atom1D] = None
    g: Optional[Atom1D] = None

    def __post_init__(self):
        object.__setattr__(self, "id", EquationId(self.id))
        if self.id in (EquationId.TRANSPORT, EquationId.WAVE):
            if self.c == 0:
                raise DomainError(f"{self.id.value} equation needs c != 0")
            if self.f is None or self.g is None:
                raise DomainError(f"{self.id.value} equation needs data f and g")


@dataclass
class SolutionReport:
    """
    Outcome of a solve: the solution descriptor when inversion succeeded, the
    transform-domain expression always, and the residual of the check.
    """

    equation: EquationId
    descriptor: Optional[Descriptor]
    transform_domain: RSExpr
    residual_max: Any = 0
    lattice_points_checked: int = 0
    inversion_complete: bool = True
    partial_fractions: Optional[RSExpr] = None
    checks: Dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> Dict[str, Any]:
        return {
            "equation": self.equation.value,
            "solution": self.descriptor.render("x", "t") if self.descriptor is not None else None,
            "transform_domain": str(self.transform_domain),
            "partial_fractions": str(self.partial_fractions) if self.partial_fractions is not None else None,
            "inversion_complete": self.inversion_complete,
            "residual_max": self.residual_max,
            "lattice_points_checked": self.lattice_points_checked,
            "checks": dict(self.checks),
        }
