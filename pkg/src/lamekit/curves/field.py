"""
Function-field operations on w^k = p(z): normal forms, d/dz, zero tests and
holomorphic differential bases.
"""

from typing import List, Sequence, Union

import sympy as sp
from loguru import logger

from ..algebra import MultiPoly, Radical, reduce_all, symbol
from ..algebra.codec import parse_expression
from ..exceptions import CurveError
from .models import CurveDifferential, CurveFunction, PlaneCurve, RationalFunction, differential


def normal_form(expr: Union[str, sp.Expr], curve: PlaneCurve) -> CurveFunction:
    """
    Reduce a rational expression in z, w modulo w^k = p(z).

    The denominator may carry parameters and z but not w.
    """
    if isinstance(expr, str):
        expr = parse_expression(expr)
    w = symbol("w")
    num, den = sp.fraction(sp.together(sp.sympify(expr)))
    if w in den.free_symbols:
        raise CurveError(f"Denominator of {expr} depends on w")
    num = sp.expand(num)
    names = {str(s) for s in num.free_symbols | den.free_symbols} - {"w"}
    denominator = MultiPoly.from_expr(den, names)
    k = curve.k
    buckets: List[MultiPoly] = [MultiPoly.constant(0) for _ in range(k)]
    if w in num.free_symbols:
        by_power = sp.Poly(num, w).as_dict()
        for (power,), coefficient in by_power.items():
            q, r = divmod(int(power), k)
            buckets[r] = buckets[r] + MultiPoly.from_expr(coefficient, names) * curve.p ** q
    else:
        buckets[0] = MultiPoly.from_expr(num, names)
    return CurveFunction(curve, tuple(RationalFunction.of(b, denominator) for b in buckets))


def derivative_on_curve(f: CurveFunction) -> CurveFunction:
    """
    d/dz along the curve.

    With dw/dz = p'/(k w^(k-1)) the term r_j w^j differentiates to
    (r_j' + j r_j p'/(k p)) w^j, so the w-degree never grows.
    """
    curve = f.curve
    if curve.p.is_zero():
        raise CurveError(f"Degenerate curve data on {curve.label}")
    log_derivative = RationalFunction.of(curve.dp(), curve.p.scale(curve.k))
    out = []
    for j, r in enumerate(f.components):
        if r.is_zero():
            out.append(r)
            continue
        term = r.diff("z")
        if j:
            term = term + r * log_derivative * RationalFunction.of(MultiPoly.constant(j))
        out.append(term)
    return CurveFunction(curve, tuple(out))


def is_zero_on_curve(f: CurveFunction, radicals: Sequence[Radical] = ()) -> bool:
    """Every component numerator vanishes after the e-relation and radical relations"""
    return all(reduce_all(c.num, radicals).is_zero() for c in f.components)


def residual_numerators(f: CurveFunction, radicals: Sequence[Radical] = ()) -> List[MultiPoly]:
    """Reduced numerators, kept for failure reports"""
    return [reduce_all(c.num, radicals) for c in f.components]


def curve_genus(curve: PlaneCurve) -> int:
    """Genus from the supported-family table"""
    d = curve.degree
    if curve.k == 2 and d >= 3:
        return (d - 1) // 2
    if curve.k == 3 and d == 4:
        return 3
    raise CurveError(f"Unsupported curve family w^{curve.k} = p(z) with deg p = {d} ({curve.label})")


def holomorphic_basis(curve: PlaneCurve) -> List[CurveDifferential]:
    """Genus-many holomorphic differentials in lexicographic order"""
    if curve.singular:
        raise CurveError(f"Curve {curve.label} is flagged singular; no holomorphic basis is computed")
    genus = curve_genus(curve)
    z = MultiPoly.var("z")
    one = MultiPoly.constant(1)
    if curve.k == 2:
        labels = ["dz/w", "z dz/w"] + [f"z^{i} dz/w" for i in range(2, genus)]
        basis = [differential(curve, z ** i, 1, labels[i]) for i in range(genus)]
    else:
        basis = [
            differential(curve, one, 1, "dz/w"),
            differential(curve, one, 2, "dz/w^2"),
            differential(curve, z, 2, "z dz/w^2"),
        ]
    logger.debug(f"Holomorphic basis of {curve.label}: {[d.label for d in basis]}")
    return basis
