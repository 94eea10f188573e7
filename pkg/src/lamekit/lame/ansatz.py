"""
Finite-form eigenfunction types for the Lamé operator d^2/dxi^2 - n(n+1)P.

Every Lamé function of integer order n is a prefactor built from
s_i = sqrt(P - e_i) times a polynomial in P = wp(xi). There are four types per n:
one symmetric in the e_i and three attached to a single root.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from ..exceptions import SpectralError


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class AnsatzKind(str, Enum):
    SYMMETRIC = "symmetric"
    ROOT_ATTACHED = "root-attached"


class Prefactor(str, Enum):
    """Prefactor shape; for root-attached types the generic root e plays e_i"""
    ONE = "1"
    SINGLE = "s_i"
    PAIR = "s_j s_k"
    TRIPLE = "s_1 s_2 s_3"


@dataclass(frozen=True)
class AnsatzType:
    """One eigenfunction family prefactor * sum_r c_r P^r, r <= poly_degree"""

    parity: Parity
    kind: AnsatzKind
    attached_root: Optional[int]
    prefactor: Tuple[int, int, int]
    poly_degree: Optional[int]

    @property
    def dimension(self) -> int:
        return 0 if self.poly_degree is None else self.poly_degree + 1

    @property
    def is_empty(self) -> bool:
        return self.poly_degree is None

    @property
    def shape(self) -> Prefactor:
        weight = sum(self.prefactor)
        return (Prefactor.ONE, Prefactor.SINGLE, Prefactor.PAIR, Prefactor.TRIPLE)[weight]

    @property
    def label(self) -> str:
        if self.kind == AnsatzKind.SYMMETRIC:
            return "symmetric"
        return f"root-{self.attached_root}"

    def to_dict(self) -> Dict[str, object]:
        return {
            "parity": self.parity.value,
            "kind": self.kind.value,
            "attached_root": self.attached_root,
            "prefactor": list(self.prefactor),
            "prefactor_shape": self.shape.value,
            "poly_degree": self.poly_degree,
            "dimension": self.dimension,
        }


def _root_prefactor(i: int, parity: Parity) -> Tuple[int, int, int]:
    if parity == Parity.ODD:
        return tuple(1 if j == i else 0 for j in (1, 2, 3))  # type: ignore[return-value]
    return tuple(0 if j == i else 1 for j in (1, 2, 3))  # type: ignore[return-value]


def enumerate_types(n: int) -> List[AnsatzType]:
    """Symmetric type first, then the three root-attached types; dimensions sum to 2n+1."""
    if n <= 0:
        raise SpectralError(f"Lamé order must be positive, got n={n}")
    if n % 2 == 0:
        parity = Parity.EVEN
        symmetric = AnsatzType(parity, AnsatzKind.SYMMETRIC, None, (0, 0, 0), n // 2)
        root_degree = n // 2 - 1
    else:
        parity = Parity.ODD
        degree = (n - 3) // 2
        symmetric = AnsatzType(parity, AnsatzKind.SYMMETRIC, None, (1, 1, 1), degree if degree >= 0 else None)
        root_degree = (n - 1) // 2
    types = [symmetric]
    for i in (1, 2, 3):
        types.append(AnsatzType(parity, AnsatzKind.ROOT_ATTACHED, i, _root_prefactor(i, parity), root_degree))
    return types


def symmetric_type(n: int) -> AnsatzType:
    return enumerate_types(n)[0]


def root_type(n: int, index: int = 1) -> AnsatzType:
    return enumerate_types(n)[index]
