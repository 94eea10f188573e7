"""
Reduction modulo the defining relations used throughout lamekit.

- the generic root e of 4t^3 - g2 t - g3 (4e^3 -> g2 e + g3)
- auxiliary radicals such as u^3 = 5, v^2 = 15, i^2 = -1
- symmetric functions of the three roots e1, e2, e3
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import sympy as sp
from sympy.polys.polyfuncs import symmetrize

from .poly import MultiPoly, Scalar, ordered_variables, symbol

E_RELATION = 4 * symbol("e") ** 3 - symbol("g2") * symbol("e") - symbol("g3")

# sigma_1, sigma_2, sigma_3 of the roots of 4t^3 - g2 t - g3
ROOT_SYMMETRIC_FUNCTIONS = (
    sp.Integer(0),
    -symbol("g2") / 4,
    symbol("g3") / 4,
)


@dataclass(frozen=True)
class Radical:
    """Auxiliary symbol with defining relation symbol**power = value"""
    symbol: str
    power: int
    value: sp.Expr

    def relation(self) -> sp.Expr:
        return symbol(self.symbol) ** self.power - self.value

    def to_dict(self) -> dict:
        return {"symbol": self.symbol, "power": self.power, "value": str(self.value)}


def reduce_power(p: MultiPoly, var: str, power: int, replacement: Union[MultiPoly, sp.Expr, Scalar]) -> MultiPoly:
    """Rewrite var**power -> replacement until the var-degree is below power"""
    if p.degree(var) < power:
        return p
    value = replacement.as_expr() if isinstance(replacement, MultiPoly) else sp.sympify(replacement)
    remainder = sp.rem(p.as_expr(), symbol(var) ** power - value, symbol(var))
    names = set(p.variables) | {str(s) for s in sp.sympify(value).free_symbols}
    return MultiPoly.from_expr(remainder, ordered_variables(names))


def reduce_e(p: MultiPoly) -> MultiPoly:
    """Degree in e at most 2 using 4e^3 = g2 e + g3; idempotent."""
    if p.degree("e") < 3:
        return p
    return reduce_power(p, "e", 3, (symbol("g2") * symbol("e") + symbol("g3")) / 4)


def reduce_radicals(p: MultiPoly, radicals: Sequence[Radical]) -> MultiPoly:
    for radical in radicals:
        p = reduce_power(p, radical.symbol, radical.power, radical.value)
    return p


def reduce_all(p: MultiPoly, radicals: Sequence[Radical] = ()) -> MultiPoly:
    """e-relation followed by every radical relation"""
    return reduce_radicals(reduce_e(p), radicals)


def product_over_roots(f: MultiPoly) -> MultiPoly:
    """
    Product f(e1) f(e2) f(e3) over the three roots, expressed in g2, g3.

    Uses the fundamental theorem on symmetric polynomials with
    sigma_1 = 0, sigma_2 = -g2/4, sigma_3 = g3/4.
    """
    f = reduce_e(f)
    if f.degree("e") <= 0:
        return f ** 3
    roots = sp.symbols("e_1:4")
    e = symbol("e")
    expr = f.as_expr()
    product = sp.expand(sp.Mul(*[expr.xreplace({e: r}) for r in roots]))
    symmetric, remainder, definitions = symmetrize(product, *roots, formal=True)
    if remainder != 0:
        raise ArithmeticError(f"Product over roots is not symmetric: remainder {remainder}")
    values = {s: ROOT_SYMMETRIC_FUNCTIONS[k] for k, (s, _) in enumerate(definitions)}
    result = sp.expand(symmetric.xreplace(values))
    names = [v for v in f.variables if v != "e"]
    return MultiPoly.from_expr(result, names)


def numeric_roots(g2: complex, g3: complex) -> np.ndarray:
    """Roots of 4t^3 - g2 t - g3"""
    return np.roots([4.0, 0.0, -complex(g2), -complex(g3)])

