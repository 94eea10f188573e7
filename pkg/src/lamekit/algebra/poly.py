"""
Sparse multivariate polynomials over the rationals.

MultiPoly wraps a sympy Poly over QQ with an explicit, canonically ordered
variable context. Contexts are merged by symbol name, so polynomials built in
different contexts can be combined freely. Nothing in here rounds.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import sympy as sp

from ..exceptions import AlgebraError

Rational = Fraction
Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction, sp.Rational]

# z, w: curve coordinates; t: scaled g3 (g3 = -t^6); e: generic root of 4t^3 - g2 t - g3;
# l1, l2: the lambda parameters of the trigonal family
CANONICAL_ORDER: Tuple[str, ...] = ("z", "w", "t", "e", "g2", "g3", "l1", "l2")

_SYMBOLS: Dict[str, sp.Symbol] = {}


def symbol(name: str) -> sp.Symbol:
    """Interned sympy symbol for a variable name"""
    if name not in _SYMBOLS:
        _SYMBOLS[name] = sp.Symbol(name)
    return _SYMBOLS[name]


def ordered_variables(names: Iterable[str]) -> Tuple[str, ...]:
    """Canonical order: the known symbols first, then auxiliaries alphabetically."""
    unique = set(names)
    known = [name for name in CANONICAL_ORDER if name in unique]
    extra = sorted(unique.difference(CANONICAL_ORDER))
    return tuple(known + extra)


def to_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


@dataclass(frozen=True)
class MultiPoly:
    """Immutable polynomial in named variables with rational coefficients."""

    variables: Tuple[str, ...]
    poly: sp.Poly

    # ------------------------------------------------------------------ construction

    @classmethod
    def from_expr(cls, expr: Union[sp.Expr, Scalar], variables: Sequence[str] = ()) -> "MultiPoly":
        """Build from a sympy expression that is polynomial in its free symbols."""
        expr = sp.sympify(expr)
        names = {str(s) for s in expr.free_symbols} | set(variables)
        ordered = ordered_variables(names)
        if not ordered:
            ordered = ("z",)
        try:
            poly = sp.Poly(sp.expand(expr), *[symbol(n) for n in ordered], domain=sp.QQ)
        except sp.PolynomialError as exc:
            raise AlgebraError(f"Not a polynomial over QQ: {expr}") from exc
        return cls(ordered, poly)

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Mapping[Exponent, Scalar]) -> "MultiPoly":
        ordered = ordered_variables(variables)
        if tuple(variables) != ordered:
            position = {name: i for i, name in enumerate(variables)}
            terms = {tuple(exp[position[name]] for name in ordered): c for exp, c in terms.items()}
        for exp in terms:
            if len(exp) != len(ordered):
                raise AlgebraError(f"Exponent vector {exp} does not match variables {ordered}")
        data = {exp: sp.Rational(to_fraction(c).numerator, to_fraction(c).denominator)
                for exp, c in terms.items() if c != 0}
        poly = sp.Poly.from_dict(data or {(0,) * len(ordered): 0}, *[symbol(n) for n in ordered], domain=sp.QQ)
        return cls(ordered, poly)

    @classmethod
    def constant(cls, value: Scalar, variables: Sequence[str] = ("z",)) -> "MultiPoly":
        return cls.from_expr(sp.Rational(to_fraction(value).numerator, to_fraction(value).denominator), variables)

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls.from_expr(symbol(name), (name,))

    # ------------------------------------------------------------------ views

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        """Exponent vector -> coefficient, zero coefficients never present"""
        return {
            tuple(int(k) for k in monom): Fraction(int(coef.p), int(coef.q))
            for monom, coef in self.poly.terms()
            if coef != 0
        }

    @property
    def gens(self) -> Tuple[sp.Symbol, ...]:
        return tuple(symbol(n) for n in self.variables)

    def as_expr(self) -> sp.Expr:
        return self.poly.as_expr()

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def is_constant(self) -> bool:
        return self.poly.is_ground

    def free_variables(self) -> Tuple[str, ...]:
        """Variables that actually occur"""
        return tuple(str(s) for s in self.gens if self.poly.degree(s) > 0)

    def degree(self, name: str) -> int:
        if name not in self.variables:
            return 0 if not self.is_zero() else -1
        degree = self.poly.degree(symbol(name))
        return int(degree) if degree != -sp.oo else -1

    def total_degree(self) -> int:
        return int(self.poly.total_degree())

    def leading_coefficient(self, name: str) -> "MultiPoly":
        return self.coefficients(name).get(self.degree(name), MultiPoly.constant(0, self.variables))

    def coefficients(self, name: str) -> Dict[int, "MultiPoly"]:
        """Split into {power of name: coefficient polynomial}"""
        if name not in self.variables:
            return {0: self}
        index = self.variables.index(name)
        rest = tuple(v for v in self.variables if v != name) or ("z",)
        buckets: Dict[int, Dict[Exponent, Fraction]] = {}
        for exp, coef in self.terms.items():
            reduced = exp[:index] + exp[index + 1:]
            if not reduced:
                reduced = (0,)
            buckets.setdefault(exp[index], {})[reduced] = coef
        return {power: MultiPoly.from_terms(rest, terms) for power, terms in buckets.items()}

    # ------------------------------------------------------------------ context handling

    def lift(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a larger variable context"""
        target = ordered_variables(variables)
        if target == self.variables:
            return self
        missing = set(self.free_variables()) - set(target)
        if missing:
            raise AlgebraError(f"Cannot drop occurring variables {sorted(missing)}")
        position = {name: i for i, name in enumerate(self.variables)}
        terms = {
            tuple(exp[position[name]] if name in position else 0 for name in target): coef
            for exp, coef in self.terms.items()
        }
        return MultiPoly.from_terms(target, terms)

    def _unified(self, other: "MultiPoly") -> Tuple["MultiPoly", "MultiPoly"]:
        names = ordered_variables(self.variables + other.variables)
        return self.lift(names), other.lift(names)

    @staticmethod
    def _coerce(value: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        return MultiPoly.constant(value)

    # ------------------------------------------------------------------ arithmetic

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        a, b = self._unified(self._coerce(other))
        return MultiPoly(a.variables, a.poly + b.poly)

    __radd__ = __add__

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        a, b = self._unified(self._coerce(other))
        return MultiPoly(a.variables, a.poly - b.poly)

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        a, b = self._unified(self._coerce(other))
        return MultiPoly(a.variables, a.poly * b.poly)

    __rmul__ = __mul__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, -self.poly)

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise AlgebraError("Negative powers are not polynomials")
        return MultiPoly(self.variables, self.poly ** exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        # keyed by variable name: equal polynomials hash equal across variable contexts
        if self.is_constant():
            return hash(self.terms.get((0,) * len(self.variables), Fraction(0)))
        return hash(frozenset(
            (tuple((name, k) for name, k in zip(self.variables, exp) if k), coef)
            for exp, coef in self.terms.items()
        ))

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._unified(other)
        return MultiPoly(a.variables, a.poly.gcd(b.poly))

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises when other does not divide self"""
        a, b = self._unified(other)
        try:
            return MultiPoly(a.variables, a.poly.exquo(b.poly))
        except sp.polys.polyerrors.ExactQuotientFailed as exc:
            raise AlgebraError(f"{other} does not divide {self}") from exc

    def scale(self, factor: Scalar) -> "MultiPoly":
        return self * MultiPoly.constant(factor, self.variables)

    def diff(self, name: str) -> "MultiPoly":
        if name not in self.variables:
            return MultiPoly.constant(0, self.variables)
        return MultiPoly(self.variables, self.poly.diff(symbol(name)))

    def subs(self, mapping: Mapping[str, Union["MultiPoly", Scalar]]) -> "MultiPoly":
        """Substitute polynomials for variables"""
        replacements = {
            symbol(name): (value.as_expr() if isinstance(value, MultiPoly) else sp.sympify(value))
            for name, value in mapping.items()
        }
        return MultiPoly.from_expr(self.as_expr().xreplace(replacements), self.variables)

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        """Numeric evaluation at complex values for every occurring variable"""
        total = 0j
        names = self.variables
        for exp, coef in self.terms.items():
            term = complex(float(coef))
            for name, k in zip(names, exp):
                if k:
                    term *= complex(values[name]) ** k
            total += term
        return total

    def __repr__(self) -> str:
        return f"MultiPoly({self.as_expr()})"

    def __str__(self) -> str:
        return str(self.as_expr())


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Exact add/sub/mul with automatic context merge"""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise AlgebraError(f"Unknown polynomial operation: {op}")


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> sp.Matrix:
    """Sylvester matrix of p, q with respect to var (rows: q-degree shifts of p, then p-degree shifts of q)"""
    m, n = p.degree(var), q.degree(var)
    if m <= 0 or n <= 0:
        raise AlgebraError(f"not bivariate in {var}")
    pc = p.coefficients(var)
    qc = q.coefficients(var)
    zero = sp.Integer(0)
    p_row = [pc[k].as_expr() if k in pc else zero for k in range(m, -1, -1)]
    q_row = [qc[k].as_expr() if k in qc else zero for k in range(n, -1, -1)]
    size = m + n
    rows = []
    for shift in range(n):
        rows.append([zero] * shift + p_row + [zero] * (size - shift - m - 1))
    for shift in range(m):
        rows.append([zero] * shift + q_row + [zero] * (size - shift - n - 1))
    return sp.Matrix(rows)


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant in var, equal to the Sylvester determinant (computed by subresultant PRS)"""
    if p.degree(var) <= 0 or q.degree(var) <= 0:
        raise AlgebraError(f"not bivariate in {var}")
    names = ordered_variables(p.variables + q.variables)
    value = sp.resultant(p.as_expr(), q.as_expr(), symbol(var))
    rest = tuple(n for n in names if n != var) or ("z",)
    return MultiPoly.from_expr(value, rest)
