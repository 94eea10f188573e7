"""
Exact verification of cover maps.

Both checks reduce to is_zero_on_curve on a single function-field element, so
the symbolic parameters stay symbolic. A false identity is reported through
the residual, never raised.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from loguru import logger

from ..algebra import MultiPoly
from ..curves import CurveFunction, PlaneCurve, RationalFunction, curve_genus, derivative_on_curve
from ..curves.field import is_zero_on_curve, residual_numerators
from ..exceptions import AlgebraError, CurveError
from .models import CoverMap


@dataclass
class VerificationResult:
    """Outcome of one identity check, with the reduced numerators when it fails"""

    cover_id: str
    check: str
    passed: bool
    residual: List[MultiPoly] = field(default_factory=list)
    in_holomorphic_span: Optional[bool] = None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cover_id": self.cover_id,
            "check": self.check,
            "passed": self.passed,
            "residual": [str(r) for r in self.residual if not r.is_zero()],
            "in_holomorphic_span": self.in_holomorphic_span,
        }


def _constant(curve: PlaneCurve, value: MultiPoly) -> CurveFunction:
    return CurveFunction.constant(curve, value)


def cover_identity(cover: CoverMap) -> CurveFunction:
    """(p')^2 - 4p^3 + G2 p + G3 on the source curve"""
    curve = cover.source
    p, pprime = cover.p_map, cover.pprime_map
    cube = (p * p * p).scale(RationalFunction.of(MultiPoly.constant(4)))
    return pprime * pprime - cube + p.scale(RationalFunction.of(cover.target.G2)) + _constant(curve, cover.target.G3)


def differential_identity(cover: CoverMap) -> CurveFunction:
    """d(p)/dz - p' * constant * coefficient of the pullback differential"""
    pulled = cover.pprime_map * cover.pullback.coefficient
    return derivative_on_curve(cover.p_map) - pulled.scale(RationalFunction.of(cover.pullback_constant))


def verify_cover(cover: CoverMap) -> VerificationResult:
    identity = cover_identity(cover)
    if is_zero_on_curve(identity, cover.radicals):
        logger.debug(f"Cover {cover.id}: target identity holds")
        return VerificationResult(cover.id, "cover", True)
    residual = residual_numerators(identity, cover.radicals)
    logger.warning(f"Cover {cover.id}: target identity fails, residual {[str(r) for r in residual if not r.is_zero()]}")
    return VerificationResult(cover.id, "cover", False, residual)


def in_holomorphic_span(curve: PlaneCurve, numerator: MultiPoly, w_power: int) -> Optional[bool]:
    """
    Whether N(z) dz/w^m is one of the basis shapes of the curve.

    None for singular curves and for families without a tabulated basis.
    """
    if curve.singular:
        return None
    try:
        genus = curve_genus(curve)
    except CurveError:
        return None
    degree = numerator.degree("z")
    if curve.k == 2:
        return w_power == 1 and degree <= genus - 1
    return (w_power == 1 and degree == 0) or (w_power == 2 and degree <= 1)


def verify_differential(cover: CoverMap) -> VerificationResult:
    identity = differential_identity(cover)
    try:
        numerator, m = cover.pullback.power_form()
        holomorphic = in_holomorphic_span(cover.source, numerator, m)
    except (AlgebraError, CurveError):
        holomorphic = None
    if is_zero_on_curve(identity, cover.radicals):
        logger.debug(f"Cover {cover.id}: pullback {cover.pullback_constant} * {cover.pullback.label} holds")
        return VerificationResult(cover.id, "differential", True, in_holomorphic_span=holomorphic)
    residual = residual_numerators(identity, cover.radicals)
    logger.warning(f"Cover {cover.id}: pullback differential fails")
    return VerificationResult(cover.id, "differential", False, residual, holomorphic)
