"""
Superelliptic curves w^k = p(z) and their function fields.
"""

from .field import curve_genus, derivative_on_curve, holomorphic_basis, is_zero_on_curve, normal_form
from .models import CurveDifferential, CurveFunction, PlaneCurve, RationalFunction, differential

__all__ = [
    "CurveDifferential",
    "CurveFunction",
    "PlaneCurve",
    "RationalFunction",
    "curve_genus",
    "derivative_on_curve",
    "differential",
    "holomorphic_basis",
    "is_zero_on_curve",
    "normal_form",
]
