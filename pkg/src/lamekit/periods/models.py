"""
Period-matrix data types and the [re, im] JSON convention for complex numbers.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator

ComplexLike = Union[complex, float, int]


class ComplexValue(BaseModel):
    """A finite complex number as it appears in JSON"""

    re: float = Field(..., description="Real part")
    im: float = Field(0.0, description="Imaginary part")

    @field_validator("re", "im")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"non-finite component {value}")
        return value

    @classmethod
    def of(cls, value: ComplexLike) -> "ComplexValue":
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_pair(self) -> List[float]:
        return [self.re, self.im]


def complex_pair(value: ComplexLike) -> List[float]:
    return ComplexValue.of(value).to_pair()


def encode_complex(value: Any) -> Any:
    """Recursively turn complex scalars, vectors and matrices into [re, im] pairs"""
    if isinstance(value, np.ndarray):
        return encode_complex(value.tolist())
    if isinstance(value, (list, tuple)):
        return [encode_complex(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return complex_pair(value)
    return value


def decode_complex(data: Any) -> Any:
    """Inverse of encode_complex: [re, im] leaves become complex, nesting becomes an ndarray"""
    def leaf(item: Any) -> bool:
        return isinstance(item, (list, tuple)) and len(item) == 2 and all(isinstance(x, (int, float)) for x in item)

    def walk(item: Any) -> Any:
        if leaf(item):
            return ComplexValue(re=float(item[0]), im=float(item[1])).to_complex()
        if isinstance(item, (list, tuple)):
            return [walk(x) for x in item]
        if isinstance(item, (int, float)):
            return complex(item)
        raise ValueError(f"Cannot decode {item!r} as a complex value")

    decoded = walk(data)
    return np.array(decoded, dtype=complex) if isinstance(decoded, list) else decoded


@dataclass
class PeriodResiduals:
    """Consistency residuals of a period matrix"""

    symmetry: float
    positivity: float
    bilinear: Optional[float] = None

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {"symmetry": self.symmetry, "positivity": self.positivity, "bilinear": self.bilinear}


@dataclass
class PeriodData:
    """
    A- and B-periods of a basis of holomorphic differentials and the
    normalized period matrix tau.

    Rows of A_periods and B_periods are differentials, columns are cycles.
    convention names the quotient that produced tau; candidates records the
    symmetry residual of every quotient that was tried.
    """

    genus: int
    A_periods: np.ndarray
    B_periods: np.ndarray
    tau: np.ndarray
    residuals: PeriodResiduals
    convention: str
    candidates: Dict[str, float] = field(default_factory=dict)
    cycle_signs: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genus": self.genus,
            "A_periods": encode_complex(self.A_periods),
            "B_periods": encode_complex(self.B_periods),
            "tau": encode_complex(self.tau),
            "residuals": self.residuals.to_dict(),
            "convention": self.convention,
            "candidates": dict(self.candidates),
        }


@dataclass
class SegmentIntegralSet:
    """Named base integrals (I, J for the Halphen curve; the omegas for genus 2)"""

    values: Dict[str, complex]

    def __post_init__(self):
        for name, value in self.values.items():
            if not np.isfinite(complex(value)):
                raise ValueError(f"Segment integral {name} is not finite: {value}")

    def __getitem__(self, name: str) -> complex:
        return self.values[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)

    def names(self) -> Sequence[str]:
        return tuple(self.values)

    def to_dict(self) -> Dict[str, List[float]]:
        return {name: complex_pair(value) for name, value in self.values.items()}
