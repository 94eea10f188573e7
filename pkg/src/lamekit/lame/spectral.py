"""
Lamé spectral curves w^2 = f_s(z) * f_1(z) f_2(z) f_3(z).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import sympy as sp
from loguru import logger
from scipy.optimize import linear_sum_assignment

from ..algebra import MultiPoly, charpoly_exact, poly_to_json, product_over_roots, reduce_e, symbol
from ..algebra.relations import numeric_roots
from ..config import get_settings
from ..exceptions import SpectralError
from .ansatz import AnsatzType, enumerate_types
from .operator import operator_matrix

Number = Union[float, complex]


@dataclass(frozen=True)
class SpectralCurveResult:
    """Factors and expanded right-hand side of the Lamé spectral curve"""

    n: int
    f_s: MultiPoly
    f_i: MultiPoly
    expanded: MultiPoly
    normalization: Fraction = Fraction(1)
    types: List[AnsatzType] = field(default_factory=list)

    def tabulated_form(self, scale: int) -> MultiPoly:
        """scale * f(-z): the sign and leading-constant convention of the classical tables"""
        flipped = self.expanded.subs({"z": MultiPoly.from_expr(-symbol("z"))})
        return flipped.scale(scale)

    def root_factor(self, e_value: sp.Expr) -> sp.Expr:
        """f_i with the generic root replaced by e_value"""
        return self.f_i.as_expr().xreplace({symbol("e"): e_value})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "f_s": {"expr": str(self.f_s), **poly_to_json(self.f_s)},
            "f_i": {"expr": str(self.f_i), **poly_to_json(self.f_i)},
            "expanded": {"expr": str(self.expanded), **poly_to_json(self.expanded)},
            "normalization": f"{self.normalization.numerator}/{self.normalization.denominator}",
            "types": [t.to_dict() for t in self.types],
        }

    def to_latex(self) -> str:
        """Factors first, then the expanded curve"""
        names = {symbol("e"): sp.Symbol("e_i"), symbol("g2"): sp.Symbol("g_2"), symbol("g3"): sp.Symbol("g_3")}

        def tex(p: MultiPoly) -> str:
            return sp.latex(p.as_expr().xreplace(names), order="lex")

        return "\n".join([
            f"n={self.n}: f_s={tex(self.f_s)}, \\quad f_i={tex(self.f_i)}",
            f"w^2={tex(self.expanded)}",
        ])


def type_charpoly(n: int, ansatz: AnsatzType) -> MultiPoly:
    """det(z I - M) for one ansatz type; 1 for an empty type"""
    if ansatz.is_empty:
        return MultiPoly.constant(1)
    return reduce_e(charpoly_exact(operator_matrix(n, ansatz)))


def lame_curve(n: int, max_n: Optional[int] = None) -> SpectralCurveResult:
    """Assemble f_s, f_i and the e-free expanded curve for order n."""
    limit = max_n if max_n is not None else get_settings().lame.max_n
    if not 1 <= n <= limit:
        raise SpectralError(f"Lamé order n={n} out of range 1..{limit}")
    types = enumerate_types(n)
    f_s = type_charpoly(n, types[0])
    if "e" in f_s.free_variables():
        raise SpectralError(f"Symmetric factor for n={n} still depends on e: {f_s}")
    f_i = type_charpoly(n, types[1])
    expanded = f_s * product_over_roots(f_i)

    if expanded.degree("z") != 2 * n + 1:
        raise SpectralError(f"Expanded curve for n={n} has degree {expanded.degree('z')}, expected {2 * n + 1}")
    lead = expanded.leading_coefficient("z")
    normalization = Fraction(1) if lead == 1 else Fraction(str(lead))
    logger.info(f"Lamé n={n}: f_s = {f_s}, f_i = {f_i}")
    return SpectralCurveResult(n, f_s, f_i, expanded, normalization, types)


def numeric_type_matrix(n: int, ansatz: AnsatzType, g2: Number, g3: Number, e: Number = 0.0) -> np.ndarray:
    matrix = operator_matrix(n, ansatz)
    values = {"g2": g2, "g3": g3, "e": e}
    return np.array([[entry.evaluate(values) for entry in row] for row in matrix.entries], dtype=complex)


@dataclass
class BandEdgeReport:
    """Roots of the expanded curve against eigenvalues of the four type matrices"""

    n: int
    curve_roots: List[complex]
    eigenvalues: List[complex]
    max_deviation: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "curve_roots": [[z.real, z.imag] for z in self.curve_roots],
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "max_deviation": self.max_deviation,
        }


def _match(a: Sequence[complex], b: Sequence[complex]) -> float:
    if len(a) != len(b):
        return float("inf")
    cost = np.abs(np.subtract.outer(np.asarray(a), np.asarray(b)))
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if len(rows) else 0.0


def band_edges(n: int, g2: Optional[float] = None, g3: Optional[float] = None) -> BandEdgeReport:
    """
    Numeric band-edge oracle.

    The 2n+1 roots of the expanded curve must coincide with the eigenvalues of
    the symmetric matrix and the root-attached matrix instantiated at each
    numeric root of 4t^3 - g2 t - g3.
    """
    settings = get_settings().lame
    g2 = settings.numeric_g2 if g2 is None else g2
    g3 = settings.numeric_g3 if g3 is None else g3
    result = lame_curve(n)
    values = {"g2": g2, "g3": g3}
    coefficients = [result.expanded.coefficients("z").get(k, MultiPoly.constant(0)).evaluate(values)
                    for k in range(2 * n + 1, -1, -1)]
    curve_roots = list(np.roots(coefficients))

    types = enumerate_types(n)
    eigenvalues: List[complex] = []
    if not types[0].is_empty:
        eigenvalues.extend(np.linalg.eigvals(numeric_type_matrix(n, types[0], g2, g3)))
    for e_value in numeric_roots(g2, g3):
        eigenvalues.extend(np.linalg.eigvals(numeric_type_matrix(n, types[1], g2, g3, e_value)))

    deviation = _match(curve_roots, eigenvalues)
    logger.debug(f"Band edges n={n}: max deviation {deviation:.3e}")
    return BandEdgeReport(n, [complex(z) for z in curve_roots], [complex(z) for z in eigenvalues], deviation)
