"""
Period engine: complete elliptic integrals, branch-tracked contour
quadrature and the genus-2 / Halphen period matrices.
"""

from .elliptic import elliptic_K, elliptic_K_quad, random_moduli
from .genus2 import Genus2Periods, genus2_contour_periods, genus2_periods
from .halphen import HalphenPeriods, genus3_periods
from .models import ComplexValue, PeriodData, PeriodResiduals, SegmentIntegralSet, decode_complex, encode_complex
from .quadrature import NumericCurve, contour_integral, integrate_forms, monodromy_factor, reference_root
from .residuals import riemann_residuals, select_tau

__all__ = [
    "ComplexValue",
    "Genus2Periods",
    "HalphenPeriods",
    "NumericCurve",
    "PeriodData",
    "PeriodResiduals",
    "SegmentIntegralSet",
    "contour_integral",
    "decode_complex",
    "elliptic_K",
    "elliptic_K_quad",
    "encode_complex",
    "genus2_contour_periods",
    "genus2_periods",
    "genus3_periods",
    "integrate_forms",
    "monodromy_factor",
    "random_moduli",
    "reference_root",
    "riemann_residuals",
    "select_tau",
]
