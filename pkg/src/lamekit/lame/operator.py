"""
Matrix of L = d^2/dxi^2 - n(n+1)P on the basis {F * P^r} of an ansatz type.

With F the prefactor, F''/F = A(P) and F' P'/F = B(P), so

    L(F P^r)/F = A P^r + 2r B P^(r-1) + r(r-1) P^(r-2) (4P^3 - g2 P - g3)
                 + r P^(r-1) (6P^2 - g2/2) - n(n+1) P^(r+1)

which stays inside the span for the degrees fixed by the ansatz.
"""

from typing import Dict, Tuple

import sympy as sp
from loguru import logger

from ..algebra import MultiPoly, PolyMatrix, reduce_e, symbol
from ..exceptions import SpectralError
from .ansatz import AnsatzType, Prefactor

_P = sp.Symbol("P")


def prefactor_terms(shape: Prefactor) -> Tuple[sp.Expr, sp.Expr]:
    """(A, B) for the prefactor shape, in terms of P, the generic root e and g2"""
    e, g2 = symbol("e"), symbol("g2")
    table: Dict[Prefactor, Tuple[sp.Expr, sp.Expr]] = {
        Prefactor.ONE: (sp.Integer(0), sp.Integer(0)),
        Prefactor.SINGLE: (2 * _P + e, 2 * (_P ** 2 + e * _P + e ** 2 - g2 / 4)),
        Prefactor.PAIR: (6 * _P - 3 * e, 2 * (2 * _P ** 2 - e * _P - e ** 2)),
        Prefactor.TRIPLE: (12 * _P, 6 * _P ** 2 - g2 / 2),
    }
    return table[shape]


def apply_operator(n: int, ansatz: AnsatzType, r: int) -> sp.Expr:
    """L(F P^r)/F as a polynomial in P"""
    g2, g3 = symbol("g2"), symbol("g3")
    a, b = prefactor_terms(ansatz.shape)
    pprime_sq = 4 * _P ** 3 - g2 * _P - g3
    pdouble = 6 * _P ** 2 - g2 / 2
    expr = a * _P ** r - n * (n + 1) * _P ** (r + 1)
    if r >= 1:
        expr += 2 * r * b * _P ** (r - 1) + r * pdouble * _P ** (r - 1)
    if r >= 2:
        expr += r * (r - 1) * pprime_sq * _P ** (r - 2)
    return sp.expand(expr)


def operator_matrix(n: int, ansatz: AnsatzType) -> PolyMatrix:
    """Square matrix over QQ[g2, g3, e]; column r holds the P-coefficients of L(F P^r)/F."""
    if ansatz.is_empty:
        raise SpectralError(f"Ansatz type {ansatz.label} is empty for n={n}")
    size = ansatz.dimension
    columns = []
    for r in range(size):
        image = sp.Poly(apply_operator(n, ansatz, r), _P)
        coefficients = {int(k[0]): v for k, v in image.as_dict().items()}
        overflow = [k for k, v in coefficients.items() if k >= size and reduce_e(MultiPoly.from_expr(v)) != 0]
        if overflow:
            raise SpectralError(f"Operator leaves the span for n={n}, type {ansatz.label}: P^{overflow}")
        columns.append([coefficients.get(s, sp.Integer(0)) for s in range(size)])
    rows = [[reduce_e(MultiPoly.from_expr(columns[r][s], ("g2", "g3"))) for r in range(size)] for s in range(size)]
    matrix = PolyMatrix.from_rows(rows)
    logger.debug(f"Operator matrix n={n} {ansatz.label}: {matrix.to_lists()}")
    return matrix
