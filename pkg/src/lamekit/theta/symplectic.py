"""
Integer symplectic algebra for Martens reduction.

Row vectors are (p_1..p_g, q_1..q_g) and symplectic matrices act on the
right. All integer work is exact (sympy matrices of Python ints).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger

from ..exceptions import SymplecticError
from .riemann import SiegelMatrix


def standard_J(genus: int) -> sp.Matrix:
    """[[0, I], [-I, 0]]"""
    identity = sp.eye(genus)
    zero = sp.zeros(genus)
    return sp.BlockMatrix([[zero, identity], [-identity, zero]]).as_explicit()


def as_int_matrix(rows: Any) -> sp.Matrix:
    matrix = sp.Matrix(rows)
    for entry in matrix:
        if not entry.is_integer:
            raise SymplecticError(f"Non-integer entry {entry}")
    return matrix


@dataclass(frozen=True)
class IntSymplectic:
    """Integer 2g x 2g matrix T with T J T^T = J"""

    matrix: sp.Matrix

    def __post_init__(self):
        matrix = as_int_matrix(self.matrix)
        rows, cols = matrix.shape
        if rows != cols or rows % 2:
            raise SymplecticError(f"Symplectic matrices are 2g x 2g, got {rows}x{cols}")
        J = standard_J(rows // 2)
        if matrix * J * matrix.T != J:
            raise SymplecticError("T J T^T != J")
        object.__setattr__(self, "matrix", sp.ImmutableMatrix(matrix))

    @classmethod
    def identity(cls, genus: int) -> "IntSymplectic":
        return cls(sp.eye(2 * genus))

    @property
    def genus(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def J(self) -> sp.Matrix:
        return standard_J(self.genus)

    def inverse(self) -> "IntSymplectic":
        """-J T^T J"""
        J = self.J
        return IntSymplectic(-J * self.matrix.T * J)

    def __matmul__(self, other: "IntSymplectic") -> "IntSymplectic":
        return IntSymplectic(self.matrix * other.matrix)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.matrix.tolist(), dtype=float)

    def to_lists(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.matrix.tolist()]


def hopf_number(m: Any) -> int:
    """The positive h with m J m^T = [[0, -h], [h, 0]] up to the sign of h"""
    m = as_int_matrix(m)
    if m.shape[0] != 2 or m.shape[1] % 2:
        raise SymplecticError(f"m must be 2 x 2g, got {m.shape[0]}x{m.shape[1]}")
    form = m * standard_J(m.shape[1] // 2) * m.T
    if form[0, 0] != 0 or form[1, 1] != 0 or form[0, 1] != -form[1, 0]:
        raise SymplecticError(f"m J m^T is not antisymmetric: {form.tolist()}")
    h = abs(int(form[1, 0]))
    if h == 0:
        raise SymplecticError("m J m^T vanishes: the relation is isotropic")
    return h


class _Reducer:
    """Accumulates elementary symplectic column moves applied to a 2 x 2g matrix"""

    def __init__(self, m: sp.Matrix):
        self.g = m.shape[1] // 2
        self.m = sp.Matrix(m)
        self.S = sp.eye(2 * self.g)

    def apply(self, E: sp.Matrix) -> None:
        self.m = self.m * E
        self.S = self.S * E

    def p(self, row: int, i: int) -> int:
        return int(self.m[row, i])

    def q(self, row: int, i: int) -> int:
        return int(self.m[row, self.g + i])

    def shear_q(self, i: int, c: int) -> None:
        """q_i += c p_i"""
        if c:
            E = sp.eye(2 * self.g)
            E[i, self.g + i] = c
            self.apply(E)

    def shear_p(self, i: int, c: int) -> None:
        """p_i += c q_i"""
        if c:
            E = sp.eye(2 * self.g)
            E[self.g + i, i] = c
            self.apply(E)

    def unimodular(self, U: sp.Matrix) -> None:
        """(p, q) -> (p U, q U^{-T})"""
        E = sp.zeros(2 * self.g)
        E[:self.g, :self.g] = U
        E[self.g:, self.g:] = U.inv().T
        self.apply(E)

    def add_p(self, source: int, target: int, c: int) -> None:
        """p_target += c p_source"""
        if c:
            U = sp.eye(self.g)
            U[source, target] = c
            self.unimodular(U)

    def swap_pairs(self, i: int, j: int) -> None:
        if i != j:
            U = sp.eye(self.g)
            U[i, i] = U[j, j] = 0
            U[i, j] = U[j, i] = 1
            self.unimodular(U)

    def negate_pair(self, i: int) -> None:
        U = sp.eye(self.g)
        U[i, i] = -1
        self.unimodular(U)

    def clear_q(self, row: int, i: int) -> None:
        """Euclid inside the pair (p_i, q_i) until q_i = 0"""
        while self.p(row, i) != 0 and self.q(row, i) != 0:
            p, q = self.p(row, i), self.q(row, i)
            if abs(q) >= abs(p):
                self.shear_q(i, -(q // p))
            else:
                self.shear_p(i, -(p // q))
        if self.p(row, i) == 0 and self.q(row, i) != 0:
            self.shear_p(i, 1)
            self.shear_q(i, -1)

    def gather_p(self, row: int, pairs: Sequence[int]) -> None:
        """Euclid across pairs until only p at pairs[0] is nonzero, and positive"""
        target = pairs[0]
        for j in pairs[1:]:
            while self.p(row, j) != 0:
                if self.p(row, target) == 0:
                    self.swap_pairs(target, j)
                    continue
                a, b = self.p(row, target), self.p(row, j)
                if abs(b) >= abs(a):
                    self.add_p(target, j, -(b // a))
                else:
                    self.add_p(j, target, -(a // b))
        if self.p(row, target) < 0:
            self.negate_pair(target)


def normalize_rows(product: Any) -> Tuple[sp.Matrix, sp.Matrix]:
    """
    Find the unimodular row operation L with L * product in standard form:
    row 1 = e_{p1}, row 2 supported on p2 (entry 1) and q1. The q1 entry is
    the (1, 2) entry of m J m^T, so its sign keeps the orientation of m.
    """
    product = as_int_matrix(product)
    g = product.shape[1] // 2
    if g < 2:
        raise SymplecticError("Standard form needs genus >= 2")
    pivot = product[:, [0, 1]]
    if abs(pivot.det()) != 1:
        raise SymplecticError(f"Columns p1, p2 of {product.tolist()} are not unimodular")
    L = pivot.inv()
    standard = L * product
    for column in range(2 * g):
        if column in (0, 1, g):
            continue
        if any(standard[row, column] != 0 for row in range(2)):
            raise SymplecticError(f"{product.tolist()} has support outside p1, p2, q1")
    if standard[0, g] != 0:
        raise SymplecticError(f"First row of {standard.tolist()} is not a unit vector")
    return L, standard


@dataclass
class StandardForm:
    """row_op * m * transform.inverse() == standard (transform = S^{-1})"""

    m: sp.Matrix
    S: IntSymplectic
    standard: sp.Matrix
    row_op: sp.Matrix
    hopf: int

    @property
    def transform(self) -> IntSymplectic:
        return self.S.inverse()

    def check(self) -> bool:
        return self.row_op * self.m * self.S.matrix == self.standard

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": [[int(x) for x in row] for row in self.m.tolist()],
            "S": self.S.to_lists(),
            "standard": [[int(x) for x in row] for row in self.standard.tolist()],
            "row_op": [[int(x) for x in row] for row in self.row_op.tolist()],
            "hopf": self.hopf,
        }


def standard_form(m: Any) -> StandardForm:
    """
    Bring a 2 x 2g Pi-relation matrix to Martens standard form by integer
    symplectic column moves and a unimodular row operation.
    """
    m = as_int_matrix(m)
    if m.shape[0] != 2 or m.shape[1] % 2:
        raise SymplecticError(f"m must be 2 x 2g, got {m.shape[0]}x{m.shape[1]}")
    if m.rank() < 2:
        raise SymplecticError(f"m = {m.tolist()} is rank deficient")
    h = hopf_number(m)
    reducer = _Reducer(m)
    g = reducer.g

    for i in range(g):
        reducer.clear_q(0, i)
    reducer.gather_p(0, list(range(g)))
    if reducer.p(0, 0) != 1:
        raise SymplecticError(f"First row of m = {m.tolist()} is not primitive (content {reducer.p(0, 0)})")

    # pairs 2..g of the second row, after removing its p1 multiple of row 1
    for i in range(1, g):
        reducer.clear_q(1, i)
    if all(reducer.p(1, i) == 0 for i in range(1, g)):
        raise SymplecticError(f"Second row of m = {m.tolist()} has no support outside the first pair")
    reducer.gather_p(1, list(range(1, g)))
    if reducer.p(1, 1) != 1 and reducer.q(1, 0) != 0:
        # p1 += p2 moves -q1 into q2; Euclid in pair 2 then reaches gcd(p2, q1)
        reducer.add_p(1, 0, 1)
        reducer.clear_q(1, 1)
        reducer.gather_p(1, list(range(1, g)))
    if reducer.p(1, 1) != 1:
        raise SymplecticError(f"Second row of m = {m.tolist()} is not primitive outside the first pair")

    L, standard = normalize_rows(reducer.m)

    S = IntSymplectic(reducer.S)
    result = StandardForm(m, S, standard, L, h)
    if not result.check():
        raise SymplecticError("Standard form bookkeeping failed")
    logger.debug(f"Standard form of {m.tolist()}: {standard.tolist()} (hopf {h})")
    return result


def transform_tau(tau: Any, T: IntSymplectic) -> SiegelMatrix:
    """[A B] = [I tau] (J T)^{-1}, tau~ = A^{-1} B"""
    tau = SiegelMatrix.of(tau)
    if T.genus != tau.genus:
        raise SymplecticError(f"T has genus {T.genus}, tau has genus {tau.genus}")
    g = tau.genus
    inverse_JT = -(T.J * T.matrix.T)
    left = np.hstack([np.eye(g), tau.tau])
    AB = left @ np.array(inverse_JT.tolist(), dtype=float)
    A, B = AB[:, :g], AB[:, g:]
    if abs(np.linalg.det(A)) < 1e-12:
        raise SymplecticError("A is singular; the transformation is not defined at this tau")
    return SiegelMatrix(np.linalg.solve(A, B))


def _rational(value: float, limit: int) -> Fraction:
    fraction = Fraction(value).limit_denominator(limit)
    if abs(float(fraction) - value) > 1e-7 * max(1.0, abs(value)):
        raise SymplecticError(f"{value} is not close to a rational with denominator <= {limit}")
    return fraction


def _fraction_gcd(values: Sequence[Fraction]) -> Fraction:
    values = [v for v in values if v != 0]
    if not values:
        return Fraction(0)
    denominator = 1
    for v in values:
        denominator = denominator * v.denominator // gcd(denominator, v.denominator)
    content = 0
    for v in values:
        content = gcd(content, int(v * denominator))
    return Fraction(content, denominator)


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(x, y, g) with x a + y b = g >= 0"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        quotient = a // b
        a, b = b, a - quotient * b
        x0, x1 = x1, x0 - quotient * x1
        y0, y1 = y1, y0 - quotient * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def _extended_gcd_combination(values: Sequence[Fraction]) -> List[int]:
    """Integer weights c with sum c_i values_i = gcd(values)"""
    weights = [0] * len(values)
    current, current_weights = Fraction(0), list(weights)
    for index, v in enumerate(values):
        if v == 0:
            continue
        if current == 0:
            current = v
            current_weights = [0] * len(values)
            current_weights[index] = 1
            continue
        denominator = current.denominator * v.denominator
        a, b = int(current * denominator), int(v * denominator)
        x, y, g = _egcd(a, b)
        current = Fraction(g, denominator)
        current_weights = [x * w for w in current_weights]
        current_weights[index] += y
    if current < 0:
        current_weights = [-w for w in current_weights]
    return current_weights


@dataclass
class PiRelation:
    """row = pi1 * m[0] + pi2 * m[1] with pi1 rational and pi2 = a + b rho"""

    m: sp.Matrix
    pi1: Fraction
    pi2: Tuple[Fraction, Fraction]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": [[int(x) for x in row] for row in self.m.tolist()],
            "pi1": str(self.pi1),
            "pi2": [str(self.pi2[0]), str(self.pi2[1])],
        }


def pi_relation(row: Sequence[complex], limit: int = 1000) -> PiRelation:
    """
    Integer relation matrix of a period row lying in Q + Q rho.

    Coordinates (alpha, beta) with v = alpha + beta rho are rationalized; the
    rank-2 lattice they span is put in Hermite form: pi2 generates the beta
    projection, pi1 the rational sublattice, and the rational part of pi2 is
    reduced into [0, pi1).
    """
    row = np.asarray(row, dtype=complex)
    beta = [_rational(2 * v.imag / np.sqrt(3), limit) for v in row]
    alpha = [_rational(v.real + v.imag / np.sqrt(3), limit) for v in row]

    beta_generator = _fraction_gcd(beta)
    if beta_generator == 0:
        raise SymplecticError("Period row is rational; no rank-2 relation exists")
    weights = _extended_gcd_combination(beta)
    a2 = sum((w * a for w, a in zip(weights, alpha)), Fraction(0))
    m2 = [b / beta_generator for b in beta]
    rational_parts = [a - k * a2 for a, k in zip(alpha, m2)]
    pi1 = _fraction_gcd(rational_parts)
    if pi1 == 0:
        raise SymplecticError("Period row spans a rank-1 lattice")
    shift = (a2 // pi1)
    a2 -= shift * pi1
    m1 = [(a - k * a2) / pi1 for a, k in zip(alpha, m2)]
    for value in m1 + m2:
        if value.denominator != 1:
            raise SymplecticError(f"Relation coefficients are not integral: {m1}, {m2}")
    m = sp.Matrix([[int(v) for v in m1], [int(v) for v in m2]])
    logger.debug(f"Pi relation: pi1={pi1}, pi2={a2}+{beta_generator} rho, m={m.tolist()}")
    return PiRelation(m, pi1, (a2, beta_generator))
