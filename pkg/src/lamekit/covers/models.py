"""
Cover maps from superelliptic curves onto elliptic curves.

The JSON catalog is validated with pydantic record models; verified covers are
held in plain dataclasses over the exact algebra types.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..algebra import MultiPoly, Radical
from ..curves import CurveDifferential, CurveFunction, PlaneCurve
from ..exceptions import CurveError


class RadicalSpec(BaseModel):
    """Adjoined symbol with a defining relation symbol**power = value"""
    symbol: str = Field(description="Auxiliary symbol name, e.g. 'u'")
    power: int = Field(ge=2, description="Exponent of the defining relation")
    value: str = Field(description="Right-hand side of the relation, e.g. '5' or '-1'")


class CurveSpec(BaseModel):
    """Source curve w^k = p(z)"""
    k: int = Field(default=2, ge=2, description="Power of w")
    p: str = Field(description="Right-hand side as an expression in z and the parameters")
    singular: bool = Field(default=False, description="Curve has a singular affine model")


class TargetSpec(BaseModel):
    """Elliptic target (p')^2 = 4p^3 - G2 p - G3"""
    G2: str = Field(description="Invariant G2 in the source parameters")
    G3: str = Field(description="Invariant G3 in the source parameters")
    degenerate: bool = Field(default=False, description="Discriminant vanishes identically")


class PullbackSpec(BaseModel):
    """d(p)/p' = constant * numerator dz / w^w_power"""
    constant: str = Field(default="1", description="Scalar factor, may carry parameters and radicals")
    numerator: str = Field(default="1", description="Polynomial numerator N(z)")
    w_power: int = Field(default=1, ge=0, description="Exponent m in dz/w^m")


class PrintedValues(BaseModel):
    """Values as they appear in print, kept when they differ from the verified ones"""
    G2: Optional[str] = Field(default=None, description="Printed G2")
    G3: Optional[str] = Field(default=None, description="Printed G3")
    note: str = Field(default="", description="How the printed value relates to the verified one")


class CoverRecord(BaseModel):
    """One catalog entry"""
    id: str = Field(description="Catalog identifier")
    description: str = Field(default="", description="Human-readable summary")
    source: str = Field(default="", description="Where the cover comes from")
    curve: CurveSpec
    target: TargetSpec
    p_map: str = Field(description="The p component as an expression in z, w and parameters")
    pprime_map: str = Field(description="The p' component")
    pullback: PullbackSpec = Field(default_factory=PullbackSpec)
    substitute: Dict[str, str] = Field(default_factory=dict, description="Parameter substitutions, e.g. g3 -> -t**6")
    radicals: List[RadicalSpec] = Field(default_factory=list)
    printed: Optional[PrintedValues] = None
    notes: List[str] = Field(default_factory=list)


class PrintedTableRow(BaseModel):
    """Row of the printed equianharmonic summary tables"""
    n: int = Field(ge=2, description="Lamé order")
    cover_id: str = Field(description="Catalog entry holding the verified cover")
    p_constant: int = Field(description="Constant term of p = c g3 - 4 z^3")
    G2: int = Field(description="Printed coefficient of g3^2 in G2")
    G3: int = Field(description="Printed coefficient of g3^3 in G3")
    factorized: Dict[str, Dict[str, int]] = Field(
        description="Printed prime factorizations keyed by 'p', 'G2', 'G3'; prime -> exponent"
    )


class CatalogFile(BaseModel):
    """Top-level layout of data/covers/catalog.json"""
    version: int = Field(default=1)
    covers: List[CoverRecord]
    printed_table: List[PrintedTableRow] = Field(default_factory=list)


@dataclass(frozen=True)
class EllipticTarget:
    """(p')^2 = 4p^3 - G2 p - G3"""

    G2: MultiPoly
    G3: MultiPoly
    degenerate: bool = False

    def __post_init__(self):
        if not self.degenerate and self.discriminant().is_zero():
            raise CurveError(f"Elliptic target G2={self.G2}, G3={self.G3} has vanishing discriminant")

    @property
    def equianharmonic(self) -> bool:
        return self.G2.is_zero()

    def discriminant(self) -> MultiPoly:
        return self.G2 ** 3 - self.G3 ** 2 * MultiPoly.constant(27)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "G2": str(self.G2),
            "G3": str(self.G3),
            "equianharmonic": self.equianharmonic,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class CoverMap:
    """
    A map (z, w) -> (p, p') onto an elliptic curve together with the pullback
    d(p)/p' = pullback_constant * pullback.
    """

    id: str
    source: PlaneCurve
    target: EllipticTarget
    p_map: CurveFunction
    pprime_map: CurveFunction
    pullback_constant: MultiPoly
    pullback: CurveDifferential
    radicals: Tuple[Radical, ...] = ()
    description: str = ""
    printed: Optional[Dict[str, Any]] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "description": self.description,
            "curve": {"k": self.source.k, "p": str(self.source.p), "singular": self.source.singular},
            "target": self.target.to_dict(),
            "p_map": str(self.p_map.as_expr()),
            "pprime_map": str(self.pprime_map.as_expr()),
            "pullback": {"constant": str(self.pullback_constant), "differential": self.pullback.label},
            "radicals": [r.to_dict() for r in self.radicals],
            "printed": self.printed,
            "notes": list(self.notes),
        }
