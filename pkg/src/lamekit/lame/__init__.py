"""
Lamé spectral curves for integer order n by the finite-form ansatz.
"""

from .ansatz import AnsatzKind, AnsatzType, Parity, Prefactor, enumerate_types, root_type, symmetric_type
from .operator import operator_matrix
from .series import LaurentSeries, ResidualReport, eigenfunction, series_residual_check, weierstrass_coefficients
from .spectral import BandEdgeReport, SpectralCurveResult, band_edges, lame_curve, type_charpoly

__all__ = [
    "AnsatzKind",
    "AnsatzType",
    "BandEdgeReport",
    "LaurentSeries",
    "Parity",
    "Prefactor",
    "ResidualReport",
    "SpectralCurveResult",
    "band_edges",
    "eigenfunction",
    "enumerate_types",
    "lame_curve",
    "operator_matrix",
    "root_type",
    "series_residual_check",
    "symmetric_type",
    "type_charpoly",
    "weierstrass_coefficients",
]
