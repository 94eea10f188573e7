"""
Independent check of Lamé eigenfunctions by formal Laurent series in xi.

The candidate w(xi) = F(xi) * sum_r c_r P(xi)^r is expanded around the pole of
P = wp(xi) and substituted into w'' - n(n+1) P w - z w. Exact eigenfunctions
give a residual that vanishes identically.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import sympy as sp
from loguru import logger

from ..algebra import MultiPoly, reduce_e, symbol
from ..config import get_settings
from ..exceptions import AlgebraError, SpectralError
from .ansatz import AnsatzType, Prefactor
from .operator import operator_matrix
from .spectral import numeric_type_matrix, type_charpoly

Coefficient = Union[sp.Expr, complex]
ROOT_SYMBOL = sp.Symbol("zeta")


@dataclass(frozen=True)
class LaurentSeries:
    """sum_k coefficients[k] xi^k, known for exponents below precision"""

    coefficients: Dict[int, Coefficient]
    precision: int
    simplify: Callable[[Coefficient], Coefficient] = field(default=lambda c: c, compare=False)

    @property
    def valuation(self) -> int:
        nonzero = [k for k, c in self.coefficients.items() if c != 0]
        return min(nonzero) if nonzero else self.precision

    def _make(self, coefficients: Dict[int, Coefficient], precision: int) -> "LaurentSeries":
        kept = {k: self.simplify(c) for k, c in coefficients.items() if k < precision}
        return LaurentSeries({k: c for k, c in kept.items() if c != 0}, precision, self.simplify)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out.get(k, 0) + c
        return self._make(out, min(self.precision, other.precision))

    def __neg__(self) -> "LaurentSeries":
        return self._make({k: -c for k, c in self.coefficients.items()}, self.precision)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        precision = min(self.valuation + other.precision, other.valuation + self.precision)
        out: Dict[int, Coefficient] = {}
        for i, a in self.coefficients.items():
            for j, b in other.coefficients.items():
                if i + j < precision:
                    out[i + j] = out.get(i + j, 0) + a * b
        return self._make(out, precision)

    def scale(self, factor: Coefficient) -> "LaurentSeries":
        return self._make({k: factor * c for k, c in self.coefficients.items()}, self.precision)

    def derivative(self) -> "LaurentSeries":
        return self._make({k - 1: k * c for k, c in self.coefficients.items() if k != 0}, self.precision - 1)

    def sqrt(self) -> "LaurentSeries":
        """Square root of a series with leading term xi^(-2m), leading coefficient 1"""
        v = self.valuation
        if v % 2 or self.coefficients.get(v) != 1:
            raise SpectralError(f"Series square root needs leading term xi^(even) with coefficient 1, got xi^{v}")
        length = self.precision - v
        x = [self.coefficients.get(v + i, 0) for i in range(length)]
        y: List[Coefficient] = [1]
        for i in range(1, length):
            acc = x[i] - sum((y[a] * y[i - a] for a in range(1, i)), 0)
            y.append(self.simplify(acc / 2))
        return self._make({v // 2 + i: c for i, c in enumerate(y)}, v // 2 + length)


def weierstrass_coefficients(g2: Coefficient, g3: Coefficient, count: int) -> List[Coefficient]:
    """c_2..c_count of P = xi^-2 + sum c_k xi^(2k-2)"""
    c: Dict[int, Coefficient] = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, count + 1):
        acc = sum((c[m] * c[k - m] for m in range(2, k - 1)), 0)
        if isinstance(acc, sp.Basic):
            c[k] = sp.Rational(3, (2 * k + 1) * (k - 3)) * acc
        else:
            c[k] = 3 * acc / ((2 * k + 1) * (k - 3))
    return [c[k] for k in range(2, count + 1)]


def weierstrass_series(g2: Coefficient, g3: Coefficient, precision: int,
                       simplify: Callable[[Coefficient], Coefficient]) -> LaurentSeries:
    count = max(3, precision // 2 + 2)
    coefficients: Dict[int, Coefficient] = {-2: 1}
    for k, value in enumerate(weierstrass_coefficients(g2, g3, count), start=2):
        coefficients[2 * k - 2] = value
    return LaurentSeries(coefficients, precision, simplify)._make(coefficients, precision)


def prefactor_series(shape: Prefactor, p: LaurentSeries, e: Coefficient, g2: Coefficient) -> LaurentSeries:
    """F(xi) for the prefactor shape"""
    one = LaurentSeries({0: 1}, p.precision + 10, p.simplify)
    if shape == Prefactor.ONE:
        return one
    if shape == Prefactor.SINGLE:
        return (p - one.scale(e)).sqrt()
    if shape == Prefactor.PAIR:
        return (p * p + p.scale(e) + one.scale(e * e - g2 / 4)).sqrt()
    return p.derivative().scale(sp.Rational(-1, 2) if isinstance(e, sp.Basic) else -0.5)


@dataclass
class ResidualReport:
    """Residual coefficients of w'' - n(n+1) P w - z w"""

    n: int
    ansatz: str
    order: int
    exact: bool
    max_residual: float
    nonzero: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.nonzero if self.exact else self.max_residual <= get_settings().lame.band_edge_tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "ansatz": self.ansatz,
            "order": self.order,
            "exact": self.exact,
            "max_residual": self.max_residual,
            "nonzero": [[k, c] for k, c in self.nonzero],
        }


def _exact_reducer(relation: Optional[sp.Expr]) -> Callable[[Coefficient], Coefficient]:
    """Normal form modulo the root relation in zeta (if any) and the e-relation"""

    def reduce(value: Coefficient) -> Coefficient:
        expr = sp.expand(value)
        if expr == 0:
            return sp.Integer(0)
        if relation is not None and expr.has(ROOT_SYMBOL):
            expr = sp.rem(expr, relation, ROOT_SYMBOL)
        try:
            poly = MultiPoly.from_expr(expr)
        except AlgebraError:
            return sp.simplify(expr)
        return reduce_e(poly).as_expr() if poly.degree("e") >= 3 else expr

    return reduce


def _sample_magnitude(value: Coefficient) -> float:
    """Size of a symbolic residual at the configured numeric (g2, g3) and one numeric root e"""
    settings = get_settings().lame
    e_value = complex(np.roots([4.0, 0.0, -settings.numeric_g2, -settings.numeric_g3])[0])
    sample = {symbol("g2"): sp.sympify(settings.numeric_g2), symbol("g3"): sp.sympify(settings.numeric_g3),
              symbol("e"): sp.sympify(e_value)}
    try:
        return abs(complex(sp.sympify(value).xreplace(sample).xreplace({ROOT_SYMBOL: sp.Integer(1)}).evalf()))
    except (TypeError, ValueError):
        return float("inf")


def _candidate_vector(matrix: sp.Matrix, z_value: sp.Expr, reducer) -> List[sp.Expr]:
    """First adjugate column of (z I - M) that survives reduction; it spans the kernel at a root"""
    size = matrix.shape[0]
    adjugate = (z_value * sp.eye(size) - matrix).adjugate()
    for column in range(size):
        vector = [reducer(adjugate[row, column]) for row in range(size)]
        if any(v != 0 for v in vector):
            return vector
    raise SpectralError("Adjugate vanishes identically; the eigenvalue is not simple")


def series_residual_check(n: int, ansatz: AnsatzType, z_star: Optional[Union[str, sp.Expr, complex]] = None,
                          order: Optional[int] = None, params: Optional[Mapping[str, complex]] = None
                          ) -> ResidualReport:
    """
    Substitute the candidate eigenfunction into the Lamé equation.

    z_star=None treats z as a generic root of the type's characteristic
    polynomial (exact, reduced modulo that polynomial). A sympy expression or
    string is an exact value; a Python float/complex switches to numeric mode
    and needs params {"g2", "g3", "e"}.
    """
    order = 2 * n + 6 if order is None else order
    if order < 2 * n + 4:
        raise SpectralError(f"Series order {order} too small for n={n}; need at least {2 * n + 4}")
    if ansatz.is_empty:
        raise SpectralError(f"Ansatz type {ansatz.label} is empty for n={n}")
    numeric = isinstance(z_star, (int, float, complex)) and not isinstance(z_star, bool)
    precision = order + n + 6

    if numeric:
        if params is None:
            raise SpectralError("Numeric residual check needs params g2, g3, e")
        g2, g3, e = (complex(params[k]) for k in ("g2", "g3", "e"))
        matrix = numeric_type_matrix(n, ansatz, g2, g3, e)
        _, _, vh = np.linalg.svd(complex(z_star) * np.eye(ansatz.dimension) - matrix)
        vector: List[Coefficient] = list(vh[-1].conj())
        z_value: Coefficient = complex(z_star)
        simplify: Callable[[Coefficient], Coefficient] = lambda c: complex(c)  # noqa: E731
    else:
        g2, g3, e = symbol("g2"), symbol("g3"), symbol("e")
        relation = None
        if z_star is None:
            z_value = ROOT_SYMBOL
            relation = type_charpoly(n, ansatz).as_expr().xreplace({symbol("z"): ROOT_SYMBOL})
        else:
            z_value = sp.sympify(z_star, locals={"e": e, "g2": g2, "g3": g3})
        simplify = _exact_reducer(relation)
        vector = _candidate_vector(operator_matrix(n, ansatz).to_sympy(), z_value, simplify)

    p = weierstrass_series(g2, g3, precision, simplify)
    f = prefactor_series(ansatz.shape, p, e, g2)
    poly = LaurentSeries({}, precision, simplify)
    power = LaurentSeries({0: 1}, precision, simplify)
    for coefficient in vector:
        poly = poly + power.scale(coefficient)
        power = power * p
    w = f * poly
    residual = w.derivative().derivative() - (p * w).scale(n * (n + 1)) - w.scale(z_value)

    low = -n - 2
    window = {k: c for k, c in residual.coefficients.items() if low <= k <= order}
    if residual.precision <= order:
        raise SpectralError(f"Series precision {residual.precision} does not reach order {order}")

    if numeric:
        values = [abs(complex(c)) for c in window.values()]
        report = ResidualReport(n, ansatz.label, order, False, max(values, default=0.0))
    else:
        nonzero = [(k, str(c)) for k, c in sorted(window.items()) if c != 0]
        magnitude = max((_sample_magnitude(c) for k, c in window.items() if c != 0), default=0.0)
        report = ResidualReport(n, ansatz.label, order, True, magnitude, nonzero)
    logger.debug(f"Series residual n={n} {ansatz.label}: max {report.max_residual:.3e} (exact={report.exact})")
    return report


def eigenfunction(n: int, ansatz: AnsatzType, z_star: Union[str, sp.Expr, complex],
                  params: Optional[Mapping[str, complex]] = None, tol: float = 1e-9) -> List[Coefficient]:
    """
    Kernel vector of (z_star I - M), scaled so the last nonzero entry is 1.

    Exact values use the symbolic nullspace; floats use the SVD with tol on the
    smallest singular value.
    """
    if ansatz.is_empty:
        raise SpectralError(f"Ansatz type {ansatz.label} is empty for n={n}")
    if isinstance(z_star, (int, float, complex)) and not isinstance(z_star, bool):
        if params is None:
            raise SpectralError("Numeric eigenfunction needs params g2, g3, e")
        matrix = numeric_type_matrix(n, ansatz, params["g2"], params["g3"], params.get("e", 0.0))
        _, singular, vh = np.linalg.svd(complex(z_star) * np.eye(ansatz.dimension) - matrix)
        if singular[-1] > tol * max(1.0, singular[0]):
            raise SpectralError(f"z={z_star} is not an eigenvalue (smallest singular value {singular[-1]:.3e})")
        vector = vh[-1].conj()
        last = [c for c in vector if abs(c) > tol][-1]
        return [complex(c / last) for c in vector]

    z_value = sp.sympify(z_star, locals={"e": symbol("e"), "g2": symbol("g2"), "g3": symbol("g3")})
    shifted = z_value * sp.eye(ansatz.dimension) - operator_matrix(n, ansatz).to_sympy()
    determinant = _exact_reducer(None)(shifted.det())
    if sp.simplify(determinant) != 0:
        raise SpectralError(f"z={z_star} is not a root of the type-{ansatz.label} factor (det = {determinant})")
    kernel = shifted.nullspace(simplify=True)
    if not kernel:
        raise SpectralError(f"No kernel found at z={z_star}")
    vector = [sp.simplify(c) for c in kernel[0]]
    last = [c for c in vector if c != 0][-1]
    return [sp.simplify(c / last) for c in vector]
