"""
Elliptic cover maps: exact verification, the shipped catalog and bounded search.
"""

from .catalog import CoverCatalog, PrintedRowCheck, build_cover, catalog, check_printed_table, load_catalog
from .models import CatalogFile, CoverMap, CoverRecord, EllipticTarget
from .search import SearchBounds, Template, pullback_of, search_cover, solve_triangular
from .verify import VerificationResult, verify_cover, verify_differential

__all__ = [
    "CatalogFile",
    "CoverCatalog",
    "CoverMap",
    "CoverRecord",
    "EllipticTarget",
    "PrintedRowCheck",
    "SearchBounds",
    "Template",
    "VerificationResult",
    "build_cover",
    "catalog",
    "check_printed_table",
    "load_catalog",
    "pullback_of",
    "search_cover",
    "solve_triangular",
    "verify_cover",
    "verify_differential",
]
