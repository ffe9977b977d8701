"""Boundary conditions for Rough Surface Imaging.

Dirichlet (sound-soft), impedance with a complex coefficient rho(x1), and
transmission into a lower medium with wavenumber k_minus.
"""

import logging
from dataclasses import dataclass
from tokenize import TokenError
from typing import Callable

import numpy as np
import sympy

from src.forward.errors import BoundaryConditionError

logger = logging.getLogger(__name__)

DIRICHLET = "dirichlet"
IMPEDANCE = "impedance"
TRANSMISSION = "transmission"
VARIANTS = (DIRICHLET, IMPEDANCE, TRANSMISSION)

_X1 = sympy.Symbol("x1", real=True)
_RHO_NAMESPACE = {
    "x1": _X1,
    "i": sympy.I,
    "I": sympy.I,
    "pi": sympy.pi,
    "exp": sympy.exp,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "sqrt": sympy.sqrt,
}


def compile_rho(expression: str) -> Callable[[np.ndarray], np.ndarray]:
    """Turn an impedance expression in x1 into a vectorised numpy function.

    Raises:
        BoundaryConditionError: If the text does not parse or uses other symbols.
    """
    if not expression or not expression.strip():
        raise BoundaryConditionError("Impedance expression is empty")
    try:
        expr = sympy.sympify(expression, locals=_RHO_NAMESPACE)
    except (sympy.SympifyError, SyntaxError, TypeError, TokenError) as e:
        raise BoundaryConditionError(f"Cannot parse impedance expression {expression!r}: {e}") from e
    extra = expr.free_symbols - {_X1}
    if extra:
        names = ", ".join(sorted(str(sym) for sym in extra))
        raise BoundaryConditionError(f"Impedance expression uses unknown symbols: {names}")
    fn = sympy.lambdify(_X1, expr, modules="numpy")

    def rho(x1):
        x1 = np.asarray(x1, dtype=float)
        return np.broadcast_to(np.asarray(fn(x1), dtype=complex), x1.shape)

    return rho


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary condition variant with its parameters."""

    variant: str
    rho: Callable[[np.ndarray], np.ndarray] | None = None
    rho_expr: str | None = None
    k_minus: float | None = None

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls(variant=DIRICHLET)

    @classmethod
    def impedance(cls, rho) -> "BoundaryCondition":
        """Impedance condition from an expression string or a callable of x1."""
        if isinstance(rho, str):
            return cls(variant=IMPEDANCE, rho=compile_rho(rho), rho_expr=rho)
        if callable(rho):
            return cls(variant=IMPEDANCE, rho=rho)
        value = complex(rho)
        return cls(variant=IMPEDANCE, rho=lambda x1: np.full(np.shape(x1), value), rho_expr=repr(value))

    @classmethod
    def transmission(cls, k_minus: float) -> "BoundaryCondition":
        return cls(variant=TRANSMISSION, k_minus=float(k_minus))

    @property
    def label(self) -> str:
        return self.variant

    def validate(self, k_plus: float) -> None:
        """Check the condition against the upper wavenumber.

        Raises:
            BoundaryConditionError: If the variant or its parameters are invalid.
        """
        if not k_plus > 0:
            raise BoundaryConditionError(f"k_plus must be positive, got {k_plus}")
        if self.variant not in VARIANTS:
            raise BoundaryConditionError(f"Unknown boundary condition {self.variant!r}")
        if self.variant == IMPEDANCE and self.rho is None:
            raise BoundaryConditionError("Impedance condition needs rho")
        if self.variant == TRANSMISSION:
            if self.k_minus is None or not self.k_minus > 0:
                raise BoundaryConditionError(f"k_minus must be positive, got {self.k_minus}")
            if self.k_minus == k_plus:
                raise BoundaryConditionError("Transmission needs k_minus != k_plus")
