"""
Bounded search for elliptic covers of a curve w^k = p(z).

Each template fixes the shape of p and p' up to finitely many unknowns
(scale gamma, shift beta, polynomial coefficients, target invariants G2, G3).
Matching the z-coefficients of every component of

    (p')^2 - 4 p^3 + G2 p + G3 = 0   on the curve

gives a polynomial system over QQ(params). The solver only handles systems
that become triangular: one-unknown equations are solved by factoring over
QQ(params) and keeping linear factors; when none is left, two equations are
combined by a resultant. Rational templates are first saturated by
gamma * Res(P, Q) != 0 and replaced by their lexicographic Groebner basis.

Leading coefficients are normalizations. The weighted scaling
(p, p', G2, G3) -> (l^2 p, l^3 p', l^4 G2, l^6 G3) maps covers to covers,
so alpha is fixed (-4 in cubic-in-z, 1 in linear-in-w, P and Q monic in
rational-z). A cover with another alpha is found up to this scaling when
alpha over the fixed value is a square in QQ(params).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import sympy as sp
from loguru import logger

from ..algebra import MultiPoly, symbol
from ..config import get_settings
from ..curves import CurveDifferential, CurveFunction, PlaneCurve, RationalFunction, derivative_on_curve, differential
from ..curves.field import normal_form
from ..exceptions import AlgebraError, CurveError
from .models import CoverMap, EllipticTarget
from .verify import verify_cover, verify_differential

Assignment = Dict[sp.Symbol, sp.Expr]

BETA = sp.Symbol("beta")
GAMMA = sp.Symbol("gamma")
G2 = sp.Symbol("G2")
G3 = sp.Symbol("G3")
SATURATION = sp.Symbol("t")


class Template(str, Enum):
    """Shapes of (p, p') tried by search_cover"""
    CUBIC_IN_Z = "cubic-in-z"      # p = -4 z^3 + beta, p' = gamma w z^j
    LINEAR_IN_W = "linear-in-w"    # p = w + beta, p' = Q(z)
    RATIONAL_Z = "rational-z"      # p = P(z)/Q(z)^m, P and Q monic, p' = gamma w z^j / Q^ceil(3m/2)


@dataclass(frozen=True)
class SearchBounds:
    """max_degree bounds deg P and deg Q; max_exponent bounds |j| and m"""
    max_degree: int = 3
    max_exponent: int = 3

    @classmethod
    def from_settings(cls) -> "SearchBounds":
        covers = get_settings().covers
        return cls(covers.max_degree, covers.max_exponent)


@dataclass
class Ansatz:
    """One concrete shape with its unknowns"""
    label: str
    p_expr: sp.Expr
    pprime_expr: sp.Expr
    unknowns: Tuple[sp.Symbol, ...]
    constraints: Tuple[sp.Expr, ...] = ()


def _coefficient_symbols(prefix: str, count: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f"{prefix}{i}") for i in range(count))


def _monic(z: sp.Symbol, coefficients: Sequence[sp.Symbol]) -> sp.Expr:
    degree = len(coefficients)
    return z ** degree + sum((c * z ** i for i, c in enumerate(coefficients)), sp.Integer(0))


def _ansatze(curve: PlaneCurve, template: Template, bounds: SearchBounds) -> Iterator[Ansatz]:
    z, w = symbol("z"), symbol("w")
    exponents = range(-bounds.max_exponent, bounds.max_exponent + 1)
    if template == Template.CUBIC_IN_Z:
        for j in exponents:
            yield Ansatz(f"cubic-in-z j={j}", -4 * z ** 3 + BETA, GAMMA * w * z ** j, (GAMMA, BETA, G2, G3))
    elif template == Template.LINEAR_IN_W:
        for degree in range(bounds.max_degree + 1):
            q = _coefficient_symbols("q", degree + 1)
            pprime = sum((c * z ** i for i, c in enumerate(q)), sp.Integer(0))
            yield Ansatz(f"linear-in-w deg Q={degree}", w + BETA, pprime, q + (BETA, G2, G3))
    elif template == Template.RATIONAL_Z:
        for degree in range(1, bounds.max_degree + 1):
            a = _coefficient_symbols("a", degree)
            numerator = _monic(z, a)
            for j in exponents:
                yield Ansatz(f"rational-z deg P={degree} Q=1 j={j}", numerator, GAMMA * w * z ** j,
                             (SATURATION, GAMMA) + a + (G2, G3), (SATURATION * GAMMA - 1,))
            for q_degree in range(1, bounds.max_degree + 1):
                b = _coefficient_symbols("b", q_degree)
                denominator = _monic(z, b)
                # pole orders: Q^m in p forces Q^ceil(3m/2) in p'
                saturation = SATURATION * GAMMA * sp.resultant(numerator, denominator, z) - 1
                for m in range(1, bounds.max_exponent + 1):
                    for j in exponents:
                        yield Ansatz(f"rational-z deg P={degree} deg Q={q_degree} m={m} j={j}",
                                     numerator / denominator ** m,
                                     GAMMA * w * z ** j / denominator ** ((3 * m + 1) // 2),
                                     (SATURATION, GAMMA) + a + b + (G2, G3), (sp.expand(saturation),))
    else:
        raise ValueError(f"Unknown cover template: {template}")


def matching_equations(curve: PlaneCurve, ansatz: Ansatz) -> List[sp.Expr]:
    """z-coefficients of every component numerator of the cover identity"""
    identity = ansatz.pprime_expr ** 2 - 4 * ansatz.p_expr ** 3 + G2 * ansatz.p_expr + G3
    reduced = normal_form(identity, curve)
    equations = []
    for component in reduced.components:
        if component.is_zero():
            continue
        equations.extend(c.as_expr() for c in component.num.coefficients("z").values())
    return [sp.expand(e) for e in equations if sp.expand(e) != 0]


def _numerator(expr: sp.Expr) -> sp.Expr:
    return sp.expand(sp.fraction(sp.together(expr))[0])


def lex_basis(equations: Sequence[sp.Expr], unknowns: Sequence[sp.Symbol]) -> List[sp.Expr]:
    """
    Lexicographic Groebner basis of equations in unknowns over QQ(params),
    denominators cleared. A zero-dimensional system comes out triangular.
    """
    basis = sp.groebner(list(equations), *unknowns, order="lex")
    return [_numerator(g) for g in basis.exprs]


def _rational_roots(equation: sp.Expr, unknown: sp.Symbol) -> List[sp.Expr]:
    """Roots of the linear factors of equation over QQ(params)"""
    _, factors = sp.factor_list(equation, unknown)
    roots = []
    for factor, _ in factors:
        poly = sp.Poly(factor, unknown)
        if poly.degree() == 1:
            a, b = poly.all_coeffs()
            roots.append(sp.cancel(-b / a))
    return roots


def solve_triangular(equations: Sequence[sp.Expr], unknowns: Sequence[sp.Symbol],
                     max_eliminations: int = 6) -> List[Assignment]:
    """
    All assignments of unknowns to elements of QQ(params) reachable by the
    triangular strategy. Branches that end underdetermined are dropped.
    """
    unknown_set: Set[sp.Symbol] = set(unknowns)
    solutions: List[Assignment] = []
    branches: List[Tuple[Assignment, List[sp.Expr], int]] = [({}, list(equations), 0)]

    while branches:
        assignment, pending, eliminations = branches.pop()
        current = []
        for e in pending:
            reduced = _numerator(e.xreplace(assignment)) if assignment else e
            if reduced != 0:
                current.append(reduced)
        if any(not (reduced.free_symbols & unknown_set) for reduced in current):
            continue

        if not current:
            if unknown_set.issubset(assignment):
                solutions.append({u: sp.factor(v) for u, v in assignment.items()})
            else:
                logger.debug(f"Underdetermined branch, free: {sorted(map(str, unknown_set - set(assignment)))}")
            continue

        single = [e for e in current if len(e.free_symbols & unknown_set) == 1]
        if single:
            equation = min(single, key=lambda e: sp.Poly(e, *(e.free_symbols & unknown_set)).total_degree())
            (unknown,) = equation.free_symbols & unknown_set
            for root in _rational_roots(equation, unknown):
                branches.append(({**assignment, unknown: root}, current, eliminations))
            continue

        if eliminations >= max_eliminations:
            logger.debug(f"Elimination budget exhausted with {len(current)} equations left")
            continue
        resolvent = _eliminate(current, unknown_set)
        if resolvent is None:
            logger.debug("No resultant elimination reduces the system further")
            continue
        branches.append((assignment, current + [resolvent], eliminations + 1))

    return solutions


def _eliminate(equations: Sequence[sp.Expr], unknowns: Set[sp.Symbol]) -> Optional[sp.Expr]:
    """Resultant of the cheapest pair sharing an unknown, if it drops that unknown"""
    candidates = []
    for i, a in enumerate(equations):
        for b in equations[i + 1:]:
            for u in (a.free_symbols & b.free_symbols & unknowns):
                cost = sp.degree(a, u) + sp.degree(b, u) + len((a.free_symbols | b.free_symbols) & unknowns)
                candidates.append((cost, str(u), a, b, u))
    for _, _, a, b, u in sorted(candidates, key=lambda c: (c[0], c[1])):
        res = sp.expand(sp.resultant(a, b, u))
        if res != 0 and len(res.free_symbols & unknowns) < len((a.free_symbols | b.free_symbols) & unknowns):
            return res
    return None


def _inverse(f: CurveFunction) -> CurveFunction:
    """1/f for f = r(z) w^j"""
    curve = f.curve
    nonzero = [(j, c) for j, c in enumerate(f.components) if not c.is_zero()]
    if len(nonzero) != 1:
        raise CurveError("Only monomials in w are inverted")
    j, r = nonzero[0]
    components = [RationalFunction.zero()] * curve.k
    if j == 0:
        components[0] = RationalFunction.of(r.den, r.num)
    else:
        components[curve.k - j] = RationalFunction.of(r.den, r.num * curve.p)
    return CurveFunction(curve, tuple(components))


def pullback_of(p_map: CurveFunction, pprime_map: CurveFunction) -> Tuple[MultiPoly, CurveDifferential]:
    """Split d(p)/p' into a scalar constant and N(z) dz/w^m"""
    ratio = (derivative_on_curve(p_map) * _inverse(pprime_map)).simplify()
    numerator, m = CurveDifferential(ratio).power_form()
    lead = numerator.leading_coefficient("z")
    try:
        normalized = numerator.exquo(lead)
    except AlgebraError:
        lead, normalized = MultiPoly.constant(1), numerator
    return lead, differential(p_map.curve, normalized, m, f"({normalized}) dz/w^{m}")


def _as_poly(expr: sp.Expr) -> Optional[MultiPoly]:
    try:
        return MultiPoly.from_expr(sp.expand(expr))
    except AlgebraError:
        return None


def _build(curve: PlaneCurve, ansatz: Ansatz, solution: Assignment, index: int) -> Optional[CoverMap]:
    g2_value, g3_value = _as_poly(solution[G2]), _as_poly(solution[G3])
    if g2_value is None or g3_value is None:
        logger.debug(f"{ansatz.label}: target invariants are not polynomial in the parameters")
        return None
    degenerate = (g2_value ** 3 - g3_value ** 2 * MultiPoly.constant(27)).is_zero()
    target = EllipticTarget(g2_value, g3_value, degenerate=degenerate)
    if target.degenerate:
        logger.warning(f"{ansatz.label}: target G2={g2_value}, G3={g3_value} has vanishing discriminant")

    p_map = normal_form(sp.factor(ansatz.p_expr.xreplace(solution)), curve)
    pprime_map = normal_form(sp.factor(ansatz.pprime_expr.xreplace(solution)), curve)
    if all(c.is_zero() for c in pprime_map.components):
        return None
    try:
        constant, pullback = pullback_of(p_map, pprime_map)
    except (AlgebraError, CurveError) as exc:
        logger.debug(f"{ansatz.label}: no pullback of the form N dz/w^m ({exc})")
        return None
    return CoverMap(
        id=f"{curve.label}:{ansatz.label}#{index}",
        source=curve,
        target=target,
        p_map=p_map.simplify(),
        pprime_map=pprime_map.simplify(),
        pullback_constant=constant,
        pullback=pullback,
        description=f"found by search with template {ansatz.label}",
    )


def search_cover(curve: PlaneCurve, template: str, bounds: Optional[SearchBounds] = None) -> List[CoverMap]:
    """
    Every cover of the template shape within bounds that the triangular solver
    reaches. Each returned map passes verify_cover and verify_differential.
    """
    template = Template(template)
    bounds = bounds or SearchBounds.from_settings()
    found: List[CoverMap] = []
    seen: Set[Tuple[str, str]] = set()

    for ansatz in _ansatze(curve, template, bounds):
        equations = matching_equations(curve, ansatz)
        if ansatz.constraints:
            equations = lex_basis(equations + list(ansatz.constraints), ansatz.unknowns)
        solutions = solve_triangular(equations, ansatz.unknowns)
        logger.debug(f"{ansatz.label}: {len(equations)} equations, {len(solutions)} solutions")
        for solution in solutions:
            cover = _build(curve, ansatz, solution, len(found))
            if cover is None:
                continue
            key = (str(cover.p_map.as_expr()), str(cover.pprime_map.as_expr()))
            if key in seen:
                continue
            if not (verify_cover(cover) and verify_differential(cover)):
                logger.warning(f"{ansatz.label}: solution {solution} does not re-verify; dropped")
                continue
            seen.add(key)
            found.append(cover)

    logger.info(f"search_cover({curve.label}, {template.value}): {len(found)} covers")
    return found
