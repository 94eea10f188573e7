"""
Matrices of polynomials and their characteristic polynomials.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import sympy as sp

from ..exceptions import AlgebraError
from .poly import MultiPoly, ordered_variables, symbol


@dataclass(frozen=True)
class PolyMatrix:
    """Rectangular matrix of MultiPoly entries sharing one variable context"""

    entries: Tuple[Tuple[MultiPoly, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MultiPoly]]) -> "PolyMatrix":
        if not rows or not rows[0]:
            raise AlgebraError("PolyMatrix needs at least one entry")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise AlgebraError("PolyMatrix rows must have equal length")
        names = ordered_variables(v for r in rows for entry in r for v in entry.variables)
        return cls(tuple(tuple(entry.lift(names) for entry in r) for r in rows))

    @classmethod
    def from_exprs(cls, rows: Sequence[Sequence[sp.Expr]]) -> "PolyMatrix":
        return cls.from_rows([[MultiPoly.from_expr(x) for x in r] for r in rows])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.entries[0][0].variables

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_sympy(self) -> sp.Matrix:
        return sp.Matrix([[entry.as_expr() for entry in r] for r in self.entries])

    def to_lists(self) -> List[List[str]]:
        return [[str(entry) for entry in r] for r in self.entries]

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix.from_rows([[fn(entry) for entry in r] for r in self.entries])


def charpoly_exact(matrix: PolyMatrix, var: str = "z") -> MultiPoly:
    """
    det(var*I - M), monic of degree dim(M) in var.

    Computed with the division-free Berkowitz algorithm, so no rational
    functions of the coefficient ring appear.
    """
    if not matrix.is_square():
        raise AlgebraError(f"Characteristic polynomial needs a square matrix, got {matrix.rows}x{matrix.cols}")
    if any(var in entry.free_variables() for r in matrix.entries for entry in r):
        raise AlgebraError(f"Variable {var} already occurs in the matrix")
    lam = symbol(var)
    char = matrix.to_sympy().charpoly(lam, simplify=sp.expand)
    return MultiPoly.from_expr(char.as_expr(), (var,) + matrix.variables)
