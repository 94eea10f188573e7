"""
Cover catalog: load, build and verify every shipped cover.

Entries live in data/covers/catalog.json as expression strings. Parameter
substitutions (g3 -> -t**6) are applied before parsing into normal form and
the declared radicals are reduced during verification.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import sympy as sp
from loguru import logger
from pydantic import ValidationError

from ..algebra import MultiPoly, Radical, parse_expression, symbol
from ..config import get_settings
from ..curves import PlaneCurve, differential, normal_form
from ..exceptions import AlgebraError, CatalogError, CurveError
from .models import CatalogFile, CoverMap, CoverRecord, EllipticTarget, PrintedTableRow
from .verify import VerificationResult, verify_cover, verify_differential


def _substitutions(record: CoverRecord) -> Dict[sp.Symbol, sp.Expr]:
    return {parse_expression(name): parse_expression(value) for name, value in record.substitute.items()}


def _expr(text: str, substitutions: Mapping[sp.Symbol, sp.Expr]) -> sp.Expr:
    return sp.expand(parse_expression(text).xreplace(dict(substitutions))) if substitutions else parse_expression(text)


def _poly(text: str, substitutions: Mapping[sp.Symbol, sp.Expr]) -> MultiPoly:
    return MultiPoly.from_expr(_expr(text, substitutions))


def build_cover(record: CoverRecord) -> CoverMap:
    """Turn a validated record into a CoverMap; raises CatalogError on malformed data"""
    subs = _substitutions(record)
    try:
        curve = PlaneCurve(record.curve.k, _poly(record.curve.p, subs), record.id, record.curve.singular)
        target = EllipticTarget(_poly(record.target.G2, subs), _poly(record.target.G3, subs), record.target.degenerate)
        p_map = normal_form(_expr(record.p_map, subs), curve)
        pprime_map = normal_form(_expr(record.pprime_map, subs), curve)
        numerator = _poly(record.pullback.numerator, subs)
        pullback = differential(curve, numerator, record.pullback.w_power,
                                f"({record.pullback.numerator}) dz/w^{record.pullback.w_power}")
        constant = _poly(record.pullback.constant, subs)
    except (AlgebraError, CurveError) as exc:
        raise CatalogError(f"Catalog entry {record.id} is malformed: {exc}") from exc
    radicals = tuple(Radical(r.symbol, r.power, parse_expression(r.value)) for r in record.radicals)
    printed = record.printed.model_dump() if record.printed else None
    return CoverMap(
        id=record.id,
        source=curve,
        target=target,
        p_map=p_map,
        pprime_map=pprime_map,
        pullback_constant=constant,
        pullback=pullback,
        radicals=radicals,
        description=record.description,
        printed=printed,
        notes=list(record.notes),
    )


@dataclass
class CoverCatalog:
    """Verified covers by identifier, plus the printed summary tables"""

    entries: Dict[str, CoverMap]
    printed_table: List[PrintedTableRow] = field(default_factory=list)
    results: Dict[str, List[VerificationResult]] = field(default_factory=dict)

    def lookup(self, cover_id: str) -> CoverMap:
        if cover_id not in self.entries:
            raise CatalogError(f"Unknown cover id: {cover_id}")
        return self.entries[cover_id]

    def count(self) -> int:
        return len(self.entries)

    def ids(self) -> List[str]:
        return list(self.entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": self.count(),
            "entries": {cid: cover.to_dict() for cid, cover in self.entries.items()},
            "results": {cid: [r.to_dict() for r in rs] for cid, rs in self.results.items()},
        }


def read_catalog_file(path: Union[str, Path]) -> CatalogFile:
    path = Path(path)
    try:
        with open(path, "r") as f:
            raw = json.load(f)
        return CatalogFile.model_validate(raw)
    except FileNotFoundError as exc:
        raise CatalogError(f"Cover catalog not found: {path}") from exc
    except (json.JSONDecodeError, ValidationError) as exc:
        raise CatalogError(f"Corrupt cover catalog {path}: {exc}") from exc


def load_catalog(path: Optional[Union[str, Path]] = None, verify: bool = True) -> CoverCatalog:
    """
    Load the catalog and verify every entry.

    Any entry failing either identity aborts the load with CatalogError.
    """
    path = Path(path) if path else get_settings().covers.catalog_path
    data = read_catalog_file(path)

    entries: Dict[str, CoverMap] = {}
    results: Dict[str, List[VerificationResult]] = {}
    for record in data.covers:
        if record.id in entries:
            raise CatalogError(f"Duplicate cover id in catalog: {record.id}")
        cover = build_cover(record)
        if verify:
            checks = [verify_cover(cover), verify_differential(cover)]
            failed = [r for r in checks if not r.passed]
            if failed:
                raise CatalogError(
                    f"Catalog entry {record.id} fails {', '.join(r.check for r in failed)} verification: "
                    f"{failed[0].to_dict()['residual']}"
                )
            results[record.id] = checks
        entries[record.id] = cover

    logger.info(f"Loaded {len(entries)} covers from {path}" + (" (all verified)" if verify else ""))
    return CoverCatalog(entries, list(data.printed_table), results)


@lru_cache(maxsize=1)
def catalog() -> CoverCatalog:
    """The shipped catalog, loaded and verified once per process"""
    return load_catalog()


@dataclass
class PrintedRowCheck:
    """Printed summary-table row against its factorization and the verified cover"""

    n: int
    factorization_matches: Dict[str, bool]
    verified: Dict[str, int]
    printed: Dict[str, int]

    @property
    def printed_is_verified(self) -> bool:
        return self.verified == self.printed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "factorization_matches": self.factorization_matches,
            "verified": self.verified,
            "printed": self.printed,
            "printed_is_verified": self.printed_is_verified,
        }


def _expand_factorization(factors: Mapping[str, int]) -> int:
    value = 1
    for prime, exponent in factors.items():
        value *= int(prime) ** exponent
    return value


def _g3_coefficient(expr: sp.Expr, power: int) -> int:
    g3 = symbol("g3")
    return int(sp.Poly(sp.expand(expr), g3).coeff_monomial(g3 ** power))


def check_printed_table(cat: Optional[CoverCatalog] = None) -> List[PrintedRowCheck]:
    """
    Compare each printed row with sympy's integer factorization and with the
    verified catalog cover it summarizes.
    """
    cat = cat or catalog()
    checks = []
    for row in cat.printed_table:
        printed = {"p": row.p_constant, "G2": row.G2, "G3": row.G3}
        matches = {
            key: sp.factorint(printed[key]) == {int(q): e for q, e in row.factorized[key].items()}
            for key in ("p", "G2", "G3")
        }
        cover = cat.lookup(row.cover_id)
        constant = cover.p_map.components[0].as_expr().xreplace({symbol("z"): 0})
        verified = {
            "p": _g3_coefficient(constant, 1),
            "G2": _g3_coefficient(cover.target.G2.as_expr(), 2),
            "G3": _g3_coefficient(cover.target.G3.as_expr(), 3),
        }
        check = PrintedRowCheck(row.n, matches, verified, printed)
        if not all(matches.values()) or not check.printed_is_verified:
            factorized = {key: _expand_factorization(row.factorized[key]) for key in ("G2", "G3")}
            logger.warning(f"Printed row n={row.n}: printed {printed}, factorized {factorized}, verified {verified}")
        checks.append(check)
    return checks
