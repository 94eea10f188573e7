"""
Plane curves w^k = p(z) and elements of their function fields.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp

from ..algebra import MultiPoly, poly_from_json, poly_to_json, symbol
from ..algebra.codec import rational_function_to_json
from ..exceptions import CurveError


@dataclass(frozen=True)
class PlaneCurve:
    """Superelliptic curve w^k = p(z); p may carry parameters (g2, g3, t, l1, l2, ...)"""

    k: int
    p: MultiPoly
    label: str = "curve"
    singular: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise CurveError(f"Curve exponent k must be >= 2, got {self.k}")
        if self.p.is_zero():
            raise CurveError(f"Curve {self.label}: p(z) is the zero polynomial")

    @property
    def degree(self) -> int:
        return self.p.degree("z")

    def dp(self) -> MultiPoly:
        return self.p.diff("z")

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "p": poly_to_json(self.p), "label": self.label, "singular": self.singular}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PlaneCurve":
        return cls(int(data["k"]), poly_from_json(data["p"]), str(data.get("label", "curve")),
                   bool(data.get("singular", False)))


@dataclass(frozen=True)
class RationalFunction:
    """numerator / denominator, stored without forced cancellation"""

    num: MultiPoly
    den: MultiPoly

    @classmethod
    def of(cls, num: MultiPoly, den: Optional[MultiPoly] = None) -> "RationalFunction":
        if den is None:
            den = MultiPoly.constant(1, num.variables)
        if den.is_zero():
            raise CurveError("Rational function with zero denominator")
        return cls(num, den)

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls.of(MultiPoly.constant(0))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        # lcm denominator keeps pullback identities from blowing up
        g = self.den.gcd(other.den)
        left, right = self.den.exquo(g), other.den.exquo(g)
        return RationalFunction(self.num * right + other.num * left, self.den * right)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def diff(self, name: str = "z") -> "RationalFunction":
        num = self.num.diff(name) * self.den - self.num * self.den.diff(name)
        return RationalFunction(num, self.den * self.den)

    def simplify(self) -> "RationalFunction":
        """Cancel the common factor of numerator and denominator"""
        names = self.num.variables + self.den.variables
        cancelled = sp.cancel(self.num.as_expr() / self.den.as_expr())
        num, den = sp.fraction(cancelled)
        return RationalFunction(MultiPoly.from_expr(num, names), MultiPoly.from_expr(den, names))

    def as_expr(self) -> sp.Expr:
        return self.num.as_expr() / self.den.as_expr()

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        return self.num.evaluate(values) / self.den.evaluate(values)


@dataclass(frozen=True)
class CurveFunction:
    """Sum_j r_j(z) w^j with j < k, an element of the function field of the curve"""

    curve: PlaneCurve
    components: Tuple[RationalFunction, ...]

    def __post_init__(self):
        if len(self.components) != self.curve.k:
            raise CurveError(f"Expected {self.curve.k} components, got {len(self.components)}")

    @classmethod
    def from_components(cls, curve: PlaneCurve, components: Sequence[RationalFunction]) -> "CurveFunction":
        padded = list(components) + [RationalFunction.zero()] * (curve.k - len(components))
        return cls(curve, tuple(padded))

    @classmethod
    def constant(cls, curve: PlaneCurve, value: MultiPoly) -> "CurveFunction":
        return cls.from_components(curve, [RationalFunction.of(value)])

    @classmethod
    def w_power(cls, curve: PlaneCurve, j: int) -> "CurveFunction":
        """w^j for any integer j, in normal form"""
        one = MultiPoly.constant(1)
        q, r = divmod(j, curve.k)
        if q >= 0:
            coefficient = RationalFunction.of(curve.p ** q)
        else:
            coefficient = RationalFunction.of(one, curve.p ** (-q))
        components = [RationalFunction.zero()] * curve.k
        components[r] = coefficient
        return cls(curve, tuple(components))

    def __add__(self, other: "CurveFunction") -> "CurveFunction":
        return CurveFunction(self.curve, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "CurveFunction":
        return CurveFunction(self.curve, tuple(-a for a in self.components))

    def __sub__(self, other: "CurveFunction") -> "CurveFunction":
        return self + (-other)

    def __mul__(self, other: "CurveFunction") -> "CurveFunction":
        k = self.curve.k
        p = RationalFunction.of(self.curve.p)
        out = [RationalFunction.zero() for _ in range(k)]
        for i, a in enumerate(self.components):
            if a.is_zero():
                continue
            for j, b in enumerate(other.components):
                if b.is_zero():
                    continue
                term = a * b
                if i + j >= k:
                    term = term * p
                out[(i + j) % k] = out[(i + j) % k] + term
        return CurveFunction(self.curve, tuple(out))

    def scale(self, factor: RationalFunction) -> "CurveFunction":
        return CurveFunction(self.curve, tuple(c * factor for c in self.components))

    def __pow__(self, exponent: int) -> "CurveFunction":
        result = CurveFunction.constant(self.curve, MultiPoly.constant(1))
        for _ in range(exponent):
            result = result * self
        return result

    def simplify(self) -> "CurveFunction":
        return CurveFunction(self.curve, tuple(c.simplify() for c in self.components))

    def as_expr(self) -> sp.Expr:
        w = symbol("w")
        return sum((c.as_expr() * w ** j for j, c in enumerate(self.components)), sp.Integer(0))

    def evaluate(self, values: Mapping[str, complex]) -> complex:
        """Numeric value at a point (z, w) of the curve plus parameter values"""
        total = 0j
        for j, c in enumerate(self.components):
            if not c.is_zero():
                total += c.evaluate(values) * complex(values["w"]) ** j
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {"components": [rational_function_to_json(c.num, c.den) for c in self.components]}


@dataclass(frozen=True)
class CurveDifferential:
    """coefficient * dz"""

    coefficient: CurveFunction
    label: str = field(default="")

    def power_form(self) -> Tuple[MultiPoly, int]:
        """
        Rewrite as N(z) dz / w^m with N polynomial.

        Only differentials with a single nonzero component have this form.
        """
        curve = self.coefficient.curve
        nonzero = [(j, c) for j, c in enumerate(self.coefficient.components) if not c.is_zero()]
        if len(nonzero) != 1:
            raise CurveError(f"Differential {self.label or self.coefficient.as_expr()} is not of the form N dz/w^m")
        j, c = nonzero[0]
        m = 0 if j == 0 else curve.k - j
        expr = sp.cancel(c.as_expr() * (curve.p.as_expr() if m else 1))
        num, den = sp.fraction(expr)
        if sp.Poly(den, symbol("z")).degree() > 0:
            raise CurveError(f"Differential {self.label} has a non-polynomial numerator")
        return MultiPoly.from_expr(sp.expand(num / den), ("z",)), m

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, **self.coefficient.to_dict()}


def differential(curve: PlaneCurve, numerator: MultiPoly, m: int, label: str = "") -> CurveDifferential:
    """N(z) dz / w^m"""
    coefficient = CurveFunction.w_power(curve, -m).scale(RationalFunction.of(numerator))
    return CurveDifferential(coefficient, label or f"({numerator}) dz/w^{m}")


def components_list(f: CurveFunction) -> List[sp.Expr]:
    return [c.as_expr() for c in f.components]
