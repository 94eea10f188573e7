"""
JSON codec for polynomials and rational functions.

Two accepted input forms for a polynomial:
    {"vars": ["z", "g2", "g3"], "terms": [{"exp": [3, 0, 0], "coef": "4/1"}, ...]}
    {"expr": "4*z**3 - g2*z - g3"}
Output always uses the vars/terms form; rationals are "num/den" strings.
"""

from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Union

import sympy as sp
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from ..exceptions import AlgebraError
from .poly import CANONICAL_ORDER, MultiPoly, symbol

# "i" must stay a plain symbol (adjoined with i^2 = -1), never the imaginary unit
_AUXILIARY = ("u", "v", "i", "s", "x", "y", "a", "b", "c")


def local_symbols(extra: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    names = {name: symbol(name) for name in CANONICAL_ORDER + _AUXILIARY}
    if extra:
        names.update(extra)
    return names


def parse_expression(text: str) -> sp.Expr:
    """Parse a rational expression with every name bound to a plain symbol"""
    try:
        return parse_expr(text, local_dict=local_symbols(), transformations=standard_transformations, evaluate=True)
    except (SyntaxError, TypeError, sp.SympifyError) as exc:
        raise AlgebraError(f"Cannot parse expression {text!r}: {exc}") from exc


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int]) -> Fraction:
    return Fraction(str(text))


def poly_to_json(p: MultiPoly) -> Dict[str, Any]:
    terms = sorted(p.terms.items(), reverse=True)
    return {
        "vars": list(p.variables),
        "terms": [{"exp": list(exp), "coef": format_fraction(coef)} for exp, coef in terms],
    }


def poly_from_json(data: Mapping[str, Any]) -> MultiPoly:
    if "expr" in data:
        return MultiPoly.from_expr(parse_expression(str(data["expr"])), data.get("vars", ()))
    try:
        variables = list(data["vars"])
        terms = {tuple(int(k) for k in t["exp"]): parse_fraction(t["coef"]) for t in data["terms"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"Malformed polynomial JSON: {exc}") from exc
    return MultiPoly.from_terms(variables, terms)


def rational_function_to_json(numerator: MultiPoly, denominator: MultiPoly) -> Dict[str, Any]:
    return {"num": poly_to_json(numerator), "den": poly_to_json(denominator)}
