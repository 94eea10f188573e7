"""
Contour integration of N(z) dz / w^m on a curve w^k = p(z).

Along a polyline path, w is continued analytically by nearest-root tracking
among the k roots of w^k = p(z). Each regular segment is integrated with
composite Gauss-Legendre quadrature and an order-doubling error estimate.
A path may end at a branch point a; the second half of its last segment is
then integrated in the variable s with z = a + (z0 - a) s^k, which turns
the algebraic endpoint singularity into an analytic integrand.
"""

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..algebra import MultiPoly
from ..config import get_settings
from ..config.settings import QuadratureSettings
from ..curves import CurveDifferential, PlaneCurve
from ..exceptions import BranchPointClearanceError, BranchTrackingError, CurveError, QuadratureError

MAX_BISECTIONS = 40
# a step may not exceed this fraction of the distance to the nearest branch point
STEP_FRACTION = 0.25


@lru_cache(maxsize=16)
def _leggauss(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def numeric_coefficients(poly: MultiPoly, parameters: Optional[Mapping[str, complex]] = None) -> np.ndarray:
    """Coefficients of a polynomial in z, highest power first, with parameters substituted"""
    parameters = dict(parameters or {})
    by_power = poly.coefficients("z")
    degree = max(by_power) if by_power else 0
    coefficients = [by_power[d].evaluate(parameters) if d in by_power else 0j for d in range(degree, -1, -1)]
    return np.array(coefficients, dtype=complex)


def reference_root(value: complex, k: int) -> complex:
    """
    The k-th root that labels sheet 0.

    Real values get a real root where one exists (negative for odd k);
    everything else gets the principal root.
    """
    value = complex(value)
    if abs(value.imag) <= 1e-14 * abs(value):
        real = value.real
        if real >= 0:
            return complex(real ** (1.0 / k))
        if k % 2:
            return complex(-((-real) ** (1.0 / k)))
    return value ** (1.0 / k)


@dataclass(frozen=True)
class Form:
    """N(z) dz / w^m with numeric coefficients"""

    coefficients: np.ndarray
    m: int
    label: str = ""

    def numerator(self, z: np.ndarray) -> np.ndarray:
        return np.polyval(self.coefficients, z)


@dataclass(frozen=True)
class NumericCurve:
    """w^k = lead * prod(z - r) with numeric roots"""

    k: int
    roots: np.ndarray
    lead: complex = 1.0
    label: str = "curve"
    coefficients: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.k < 2:
            raise CurveError(f"Curve exponent k must be >= 2, got {self.k}")
        roots = np.asarray(self.roots, dtype=complex)
        object.__setattr__(self, "roots", roots)
        if self.coefficients is None:
            object.__setattr__(self, "coefficients", complex(self.lead) * np.atleast_1d(np.poly(roots)))
        if len(roots) > 1:
            gaps = np.abs(np.subtract.outer(roots, roots)) + np.eye(len(roots)) * np.inf
            if gaps.min() < 1e-12 * self.scale:
                raise CurveError(f"Curve {self.label} has a repeated branch point")

    @classmethod
    def from_curve(cls, curve: PlaneCurve, parameters: Optional[Mapping[str, complex]] = None) -> "NumericCurve":
        coefficients = numeric_coefficients(curve.p, parameters)
        nonzero = np.flatnonzero(np.abs(coefficients) > 0)
        if not len(nonzero):
            raise CurveError(f"Curve {curve.label}: p(z) vanishes at the given parameters")
        coefficients = coefficients[nonzero[0]:]
        return cls(curve.k, np.roots(coefficients), coefficients[0], curve.label, coefficients)

    @property
    def scale(self) -> float:
        return float(max(np.abs(self.roots).max(initial=0.0), 1.0))

    @property
    def rho(self) -> complex:
        return cmath.exp(2j * cmath.pi / self.k)

    def p(self, z: complex) -> complex:
        return complex(np.polyval(self.coefficients, z))

    def w_roots(self, z: complex) -> np.ndarray:
        """All k values of w over z"""
        base = complex(self.p(z)) ** (1.0 / self.k)
        return base * self.rho ** np.arange(self.k)

    def sheet_value(self, z: complex, sheet: int) -> complex:
        return self.rho ** sheet * reference_root(self.p(z), self.k)

    def branch_distance(self, z: complex) -> float:
        return float(np.abs(self.roots - z).min(initial=np.inf))

    def nearest_branch(self, z: complex) -> Tuple[int, float]:
        distances = np.abs(self.roots - z)
        index = int(distances.argmin())
        return index, float(distances[index])

    def without_root(self, index: int) -> "NumericCurve":
        """The curve of Q = p / (z - roots[index])"""
        remaining = np.delete(self.roots, index)
        return NumericCurve(self.k, remaining, self.lead, f"{self.label}/branch{index}")


def _select(curve: NumericCurve, z: complex, w_prev: complex) -> Tuple[complex, bool]:
    candidates = curve.w_roots(z)
    distances = np.abs(candidates - w_prev)
    order = np.argsort(distances)
    unambiguous = distances[order[0]] <= 0.5 * distances[order[1]]
    return complex(candidates[order[0]]), bool(unambiguous)


def continue_w(curve: NumericCurve, z_from: complex, w_from: complex, z_to: complex, depth: int = 0) -> complex:
    """Analytic continuation of w along the straight step z_from -> z_to"""
    step = abs(z_to - z_from)
    if step == 0:
        return w_from
    if step <= STEP_FRACTION * curve.branch_distance(z_from):
        w, unambiguous = _select(curve, z_to, w_from)
        if unambiguous:
            return w
    if depth >= MAX_BISECTIONS:
        raise BranchTrackingError(
            f"Cannot continue w from {z_from} to {z_to} on {curve.label}: two roots are equally close"
        )
    middle = (z_from + z_to) / 2
    w_middle = continue_w(curve, z_from, w_from, middle, depth + 1)
    return continue_w(curve, middle, w_middle, z_to, depth + 1)


def track(curve: NumericCurve, points: Sequence[complex], w0: complex, z0: complex) -> np.ndarray:
    """w at successive points of a path starting at (z0, w0)"""
    values = np.empty(len(points), dtype=complex)
    z_prev, w_prev = z0, w0
    for index, z in enumerate(points):
        w_prev = continue_w(curve, z_prev, w_prev, z)
        z_prev = z
        values[index] = w_prev
    return values


@dataclass
class QuadratureResult:
    """Integrals of several forms along one path"""

    values: np.ndarray
    error: float
    panels: int
    w_end: complex
    segments: int = 0
    singular_end: bool = False
    labels: List[str] = field(default_factory=list)

    @property
    def value(self) -> complex:
        return complex(self.values[0])


def _panel_nodes(panels: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [0, 1]"""
    x, w = _leggauss(nodes)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = np.diff(edges) / 2
    t = (edges[:-1, None] + half[:, None] * (x[None, :] + 1)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return t, weights


def _regular_sum(curve: NumericCurve, forms: Sequence[Form], za: complex, zb: complex, wa: complex,
                 panels: int, nodes: int) -> np.ndarray:
    t, weights = _panel_nodes(panels, nodes)
    z = za + t * (zb - za)
    w = track(curve, z, wa, za)
    return np.array([np.sum(weights * f.numerator(z) / w ** f.m) * (zb - za) for f in forms])


def _singular_sum(curve: NumericCurve, quotient: NumericCurve, forms: Sequence[Form], a: complex, z0: complex,
                  w0: complex, panels: int, nodes: int) -> np.ndarray:
    """Integral from z0 to the branch point a in the variable s, z = a + (z0 - a) s^k"""
    k = curve.k
    offset = z0 - a
    c0 = offset ** (1.0 / k)
    t, weights = _panel_nodes(panels, nodes)
    s = t[::-1]
    weights = weights[::-1]
    z = a + offset * s ** k
    h = track(quotient, z, w0 / c0, z0)
    values = []
    for f in forms:
        integrand = f.numerator(z) * k * offset * s ** (k - 1 - f.m) / (c0 ** f.m * h ** f.m)
        values.append(-np.sum(weights * integrand))
    return np.array(values)


def _adaptive(evaluate, settings: QuadratureSettings, what: str) -> Tuple[np.ndarray, float, int]:
    """Double the panel count until the order-doubling estimate meets the target"""
    panels = 1
    while True:
        coarse = evaluate(panels, settings.nodes)
        fine = evaluate(panels, 2 * settings.nodes)
        error = float(np.abs(fine - coarse).max()) if len(fine) else 0.0
        scale = max(1.0, float(np.abs(fine).max()) if len(fine) else 1.0)
        if error <= settings.target_error * scale:
            return fine, error, panels
        if panels >= settings.max_panels:
            logger.warning(f"{what}: error estimate {error:.2e} above target at {panels} panels")
            return fine, error, panels
        panels *= 2


def _segment_clearance(curve: NumericCurve, za: complex, zb: complex, skip: Optional[int]) -> float:
    """Smallest distance from the segment to a branch point other than skip"""
    direction = zb - za
    length2 = abs(direction) ** 2
    best = np.inf
    for index, r in enumerate(curve.roots):
        if index == skip:
            continue
        t = 0.0 if length2 == 0 else min(max(((r - za) * direction.conjugate()).real / length2, 0.0), 1.0)
        best = min(best, abs(za + t * direction - r))
    return float(best)


def integrate_forms(curve: NumericCurve, forms: Sequence[Form], path: Sequence[complex], sheet: int = 0,
                    settings: Optional[QuadratureSettings] = None) -> QuadratureResult:
    """
    Integrate several forms along one polyline path.

    The start point must be regular; w there is rho^sheet times the reference
    root of p. Only the final vertex may be a branch point.
    """
    settings = settings or get_settings().quadrature
    path = [complex(z) for z in path]
    if len(path) < 2:
        raise QuadratureError("A path needs at least two vertices")
    clearance = settings.clearance * curve.scale
    if curve.branch_distance(path[0]) < clearance:
        raise BranchPointClearanceError(f"Path start {path[0]} is within {clearance:.1e} of a branch point")

    end_index, end_distance = curve.nearest_branch(path[-1])
    singular_end = end_distance <= 1e-12 * curve.scale
    w = curve.sheet_value(path[0], sheet)
    total = np.zeros(len(forms), dtype=complex)
    error, panels_used = 0.0, 0

    for index, (za, zb) in enumerate(zip(path[:-1], path[1:])):
        last = index == len(path) - 2
        skip = end_index if (last and singular_end) else None
        if _segment_clearance(curve, za, zb, skip) < clearance:
            raise BranchPointClearanceError(
                f"Segment {za} -> {zb} passes within {clearance:.1e} of a branch point of {curve.label}"
            )
        if skip is None:
            values, err, panels = _adaptive(
                lambda n, q, za=za, zb=zb, w=w: _regular_sum(curve, forms, za, zb, w, n, q), settings,
                f"segment {za} -> {zb}")
            w = continue_w(curve, za, w, zb)
            total += values
            error, panels_used = error + err, panels_used + panels
            continue

        for f in forms:
            if f.m > curve.k - 1:
                raise QuadratureError(f"dz/w^{f.m} is not integrable at a branch point of w^{curve.k} = p(z)")
        a = path[-1]
        split = za + (1 - settings.singular_split) * (a - za)
        if abs(split - za) > 0:
            values, err, panels = _adaptive(
                lambda n, q, za=za, w=w: _regular_sum(curve, forms, za, split, w, n, q), settings,
                f"segment {za} -> {split}")
            w = continue_w(curve, za, w, split)
            total += values
            error, panels_used = error + err, panels_used + panels
        quotient = curve.without_root(end_index)
        values, err, panels = _adaptive(
            lambda n, q, w=w: _singular_sum(curve, quotient, forms, a, split, w, n, q), settings,
            f"branch segment {split} -> {a}")
        total += values
        error, panels_used = error + err, panels_used + panels
        w = 0j

    logger.debug(f"Integrated {len(forms)} form(s) over {len(path) - 1} segment(s) of {curve.label}: "
                 f"{panels_used} panels, error {error:.2e}")
    return QuadratureResult(total, error, panels_used, w, len(path) - 1, singular_end, [f.label for f in forms])


def form_of(diff: CurveDifferential, parameters: Optional[Mapping[str, complex]] = None) -> Form:
    numerator, m = diff.power_form()
    return Form(numeric_coefficients(numerator, parameters), m, diff.label)


def contour_integral(curve: Union[PlaneCurve, NumericCurve], diff: CurveDifferential, path: Sequence[complex],
                     sheet: int = 0, parameters: Optional[Mapping[str, complex]] = None,
                     settings: Optional[QuadratureSettings] = None) -> complex:
    """Integral of diff along path, starting on the given sheet"""
    numeric = curve if isinstance(curve, NumericCurve) else NumericCurve.from_curve(curve, parameters)
    return integrate_forms(numeric, [form_of(diff, parameters)], path, sheet, settings).value


def track_w(curve: NumericCurve, path: Sequence[complex], sheet: int = 0) -> complex:
    """w at the end of a path that avoids branch points"""
    path = [complex(z) for z in path]
    w = curve.sheet_value(path[0], sheet)
    for za, zb in zip(path[:-1], path[1:]):
        w = continue_w(curve, za, w, zb)
    return w


def monodromy_factor(curve: NumericCurve, center: complex, radius: float, sheet: int = 0, vertices: int = 64) -> complex:
    """w after one counter-clockwise loop around center, divided by w before it"""
    angles = np.linspace(0.0, 2 * np.pi, vertices + 1)
    loop = center + radius * np.exp(1j * angles)
    loop[-1] = loop[0]
    start = curve.sheet_value(loop[0], sheet)
    return track_w(curve, loop, sheet) / start
