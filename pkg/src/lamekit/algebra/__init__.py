"""
Exact algebra kernel: rationals, sparse multivariate polynomials, resultants
and fraction-free characteristic polynomials.
"""

from .codec import parse_expression, poly_from_json, poly_to_json
from .matrix import PolyMatrix, charpoly_exact
from .poly import MultiPoly, Rational, poly_arith, resultant, symbol, sylvester_matrix
from .relations import Radical, product_over_roots, reduce_all, reduce_e, reduce_power, reduce_radicals

__all__ = [
    "MultiPoly",
    "PolyMatrix",
    "Radical",
    "Rational",
    "charpoly_exact",
    "parse_expression",
    "poly_arith",
    "poly_from_json",
    "poly_to_json",
    "product_over_roots",
    "reduce_all",
    "reduce_e",
    "reduce_power",
    "reduce_radicals",
    "resultant",
    "sylvester_matrix",
    "symbol",
]
