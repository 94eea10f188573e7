"""
Theta reduction for the genus-2 Lamé curve and the Halphen curve.

Each reduction stage records the integer data (relation matrix m, Hopf
number, symplectic transform, standard form) together with tau before and
after the transformation. The genus-2 splitting of Theta into products of
Jacobi thetas is checked numerically on random arguments.
"""

import cmath
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger

from ..config import get_settings
from ..exceptions import SymplecticError, ThetaError
from ..periods import genus2_periods
from ..periods.models import complex_pair
from .riemann import SiegelMatrix, ThetaChar, genus1_theta, theta
from .symplectic import (
    IntSymplectic,
    PiRelation,
    _rational,
    as_int_matrix,
    hopf_number,
    normalize_rows,
    pi_relation,
    standard_form,
    transform_tau,
)

RHO = cmath.exp(2j * cmath.pi / 3)
CONVENTIONS = ("unscaled", "pi_scaled")

GENUS2_M = [[0, 0, 2, 1], [1, 0, 0, 0]]
GENUS2_T = [[0, 0, 2, 1], [1, -2, 0, 2], [0, -1, 0, 1], [0, 0, 1, 0]]
GENUS2_STANDARD = [[1, 0, 0, 0], [0, 1, -2, 0]]

HALPHEN_M = [[-1, 1, 1, 1, -1, -2], [0, 0, 3, 1, -1, 1]]
HALPHEN_STAGE1_S = [
    [1, 3, -1, 0, -6, 2],
    [0, -1, -1, 0, 1, -1],
    [0, 1, 0, -3, -1, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, -1, 0, -1],
    [0, -2, 0, 2, 3, -1],
]
# the printed M.S, reached from M S by the row operation [[1, -1], [0, 1]]
PRINTED_STAGE1_STANDARD = [[-1, 0, 0, 0, 0, 0], [0, 1, 0, -5, 0, 0]]
PRINTED_STAGE1_ROW_OP = [[1, -1], [0, 1]]

# w . [I tau] lies in Q + Q rho with coordinates given by HALPHEN_M
HALPHEN_RELATION_WEIGHTS = (-1, 1, 3 * RHO + 1)


def _int_lists(matrix: sp.Matrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in matrix.tolist()]


@dataclass
class ReductionCertificate:
    """One Martens reduction step: row_op * m * transform^{-1} == standard_form"""

    stage: int
    m: sp.Matrix
    hopf: int
    transform: IntSymplectic
    standard_form: sp.Matrix
    row_op: sp.Matrix
    tau_before: SiegelMatrix
    tau_after: SiegelMatrix
    transform_source: str = "computed"
    relation: Optional[PiRelation] = None

    @property
    def factor_modulus(self) -> complex:
        """tau_after[0, 0]; the elliptic factor is C / <1, hopf * tau_after[0, 0]>"""
        return complex(self.tau_after.tau[0, 0])

    def factor_congruent(self, value: complex, tol: float = 1e-8) -> bool:
        """True when hopf * (factor_modulus - value) is an integer"""
        shifted = self.hopf * (self.factor_modulus - complex(value))
        return abs(shifted.imag) < tol and abs(shifted.real - round(shifted.real)) < tol

    def check(self) -> bool:
        return self.row_op * self.m * self.transform.inverse().matrix == self.standard_form

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "m": _int_lists(self.m),
            "hopf": self.hopf,
            "transform": self.transform.to_lists(),
            "transform_source": self.transform_source,
            "standard_form": _int_lists(self.standard_form),
            "row_op": _int_lists(self.row_op),
            "tau_before": self.tau_before.to_dict(),
            "tau_after": self.tau_after.to_dict(),
            "factor_modulus": complex_pair(self.factor_modulus),
            "relation": self.relation.to_dict() if self.relation else None,
        }


def decomposition_breadth(certificates: Sequence[ReductionCertificate]) -> int:
    """Number of terms in the final theta decomposition: the product of the Hopf numbers"""
    breadth = 1
    for certificate in certificates:
        breadth *= certificate.hopf
    return breadth


def genus2_certificate(tau: Any) -> ReductionCertificate:
    """Reduction of the genus-2 Lamé tau (block basis) with the stored transform"""
    tau = SiegelMatrix.of(tau)
    m = as_int_matrix(GENUS2_M)
    T = IntSymplectic(sp.Matrix(GENUS2_T))
    standard = m * T.inverse().matrix
    if standard != sp.Matrix(GENUS2_STANDARD):
        raise SymplecticError(f"m T^-1 = {standard.tolist()} is not the expected standard form")
    certificate = ReductionCertificate(
        stage=1,
        m=m,
        hopf=hopf_number(m),
        transform=T,
        standard_form=standard,
        row_op=sp.eye(2),
        tau_before=tau,
        tau_after=transform_tau(tau, T),
        transform_source="stored",
    )
    logger.info(f"Genus-2 reduction: hopf {certificate.hopf}, tau~[0,0] = {certificate.factor_modulus:.10g}")
    return certificate


@dataclass
class ReductionCheck:
    """Outcome of a numeric theta identity over random arguments"""

    max_residual: float
    convention: str
    samples: int
    eps: float
    seed: int
    residuals: List[float] = field(default_factory=list)
    alternative: Optional[float] = None
    extra: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_residual": self.max_residual,
            "convention": self.convention,
            "samples": self.samples,
            "eps": self.eps,
            "seed": self.seed,
            "alternative": self.alternative,
            **self.extra,
        }


def _sample_arguments(samples: int, genus: int, box: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-box, box, (samples, genus)) + 1j * rng.uniform(-box, box, (samples, genus))


def genus2_split_residual(v: Sequence[complex], tau: SiegelMatrix, tau1: complex, tau2: complex,
                          eps: Optional[float] = None, convention: str = "unscaled") -> float:
    """
    |Theta(v, tau) - RHS| with
    RHS = 1/2 th3(v1/2, tau1/2) th3(v1/2 - v2, tau2/2) + 1/2 th4(v1/2, tau1/2) th4(v1/2 - v2, tau2/2)
    """
    v1, v2 = complex(v[0]), complex(v[1])
    lhs = theta([v1, v2], tau, eps=eps)
    left, right = v1 / 2, v1 / 2 - v2
    theta3 = genus1_theta((0, 0), left, tau1 / 2, eps, convention) * genus1_theta((0, 0), right, tau2 / 2, eps, convention)
    theta4 = genus1_theta((0, "1/2"), left, tau1 / 2, eps, convention) * genus1_theta((0, "1/2"), right, tau2 / 2, eps, convention)
    return float(abs(lhs - (theta3 + theta4) / 2))


def verify_genus2_reduction(xi1: float, xi2: float, xi3: float, samples: int = 100, eps: Optional[float] = None,
                            seed: Optional[int] = None, convention: Optional[str] = None,
                            tol: float = 1e-10, points: Optional[np.ndarray] = None) -> ReductionCheck:
    """
    Max residual of the two-term Jacobi splitting of the genus-2 Lamé theta
    over random v in the configured box (or the given points).

    The configured argument convention is tried first. If it fails the
    other one is evaluated; ThetaError when both fail.
    """
    if samples < 1 and points is None:
        raise ThetaError(f"samples must be >= 1, got {samples}")
    settings = get_settings()
    eps = settings.theta.eps if eps is None else eps
    seed = settings.seed if seed is None else seed
    convention = convention or settings.theta.argument_convention
    if convention not in CONVENTIONS:
        raise ThetaError(f"Unknown theta argument convention {convention!r}")

    periods = genus2_periods(xi1, xi2, xi3, contour_check=False)
    tau = SiegelMatrix(periods.data.tau)
    if points is None:
        points = _sample_arguments(samples, 2, settings.theta.sample_box, seed)
    points = np.atleast_2d(np.asarray(points, dtype=complex))

    def run(name: str) -> List[float]:
        return [genus2_split_residual(v, tau, periods.tau1, periods.tau2, eps, name) for v in points]

    residuals = run(convention)
    check = ReductionCheck(max(residuals), convention, len(points), eps, seed, residuals)
    if check.max_residual <= tol:
        logger.info(f"Genus-2 theta splitting ({convention}): max residual {check.max_residual:.2e} over {len(points)} points")
        return check

    other = CONVENTIONS[1 - CONVENTIONS.index(convention)]
    other_residuals = run(other)
    if max(other_residuals) <= tol:
        logger.warning(f"Theta splitting fails with {convention} ({check.max_residual:.2e}) but holds with {other}")
        return ReductionCheck(max(other_residuals), other, len(points), eps, seed, other_residuals, check.max_residual)
    raise ThetaError(f"Genus-2 theta splitting fails under both conventions: "
                     f"{convention} {check.max_residual:.2e}, {other} {max(other_residuals):.2e}")


def expected_genus2_tau_tilde(tau1: complex, tau2: complex) -> np.ndarray:
    """[[tau1/2, 1/2], [1/2, -1/(2(2 + tau2))]]"""
    q = -1 / (2 * (2 + tau2))
    return np.array([[tau1 / 2, 0.5], [0.5, q]], dtype=complex)


def verify_transformation_formula(xi1: float, xi2: float, xi3: float, samples: int = 20,
                                  eps: Optional[float] = None, seed: Optional[int] = None) -> ReductionCheck:
    """
    Transformed theta with characteristic [0, 0; 1/2, 0] at tau~ split into
    genus-1 factors:

        Theta[0 0; 1/2 0](u, tau~) = th[0; 1/2](u1, tau1/2) th[0; 0](2 u2, 4 q)
                                    + th[0; 0](u1, tau1/2) th[1/2; 0](2 u2, 4 q)

    with q = -1/(2(2 + tau2)), u1 = -v1/2 and u2 = -(v1 - 2 v2)/(2(2 + tau2)).
    Also reports how far transform_tau lands from the closed form of tau~.
    """
    settings = get_settings()
    eps = settings.theta.eps if eps is None else eps
    seed = settings.seed if seed is None else seed
    periods = genus2_periods(xi1, xi2, xi3, contour_check=False)
    s, r = periods.tau1, periods.tau2
    certificate = genus2_certificate(periods.data.tau)
    expected = expected_genus2_tau_tilde(s, r)
    tau_residual = float(np.abs(certificate.tau_after.tau - expected).max())

    q = expected[1, 1]
    char = ThetaChar.parse("0,0;1/2,0")
    residuals = []
    for v1, v2 in _sample_arguments(samples, 2, settings.theta.sample_box, seed):
        u1, u2 = -v1 / 2, -(v1 - 2 * v2) / (2 * (2 + r))
        lhs = theta([u1, u2], certificate.tau_after, char, eps)
        rhs = (genus1_theta((0, "1/2"), u1, s / 2, eps) * genus1_theta((0, 0), 2 * u2, 4 * q, eps)
               + genus1_theta((0, 0), u1, s / 2, eps) * genus1_theta(("1/2", 0), 2 * u2, 4 * q, eps))
        residuals.append(float(abs(lhs - rhs)))
    check = ReductionCheck(max(residuals), "unscaled", samples, eps, seed, residuals,
                           extra={"tau_tilde_residual": tau_residual})
    logger.info(f"Transformation formula: max residual {check.max_residual:.2e}, tau~ residual {tau_residual:.2e}")
    return check


def expected_halphen_stage1(rho: complex = RHO) -> np.ndarray:
    """tau~ after the stored stage-1 transform (tau~[0, 0] is rho/5, congruent to (1 + rho)/5 mod 1/5)"""
    return np.array([
        [rho / 5, 1 / 5, 0],
        [1 / 5, 0.5 + rho / 5, rho / 2],
        [0, rho / 2, 1.5 * rho + 0.5],
    ], dtype=complex)


def expected_halphen_stage2(rho: complex = RHO) -> np.ndarray:
    return np.array([[(11 + rho) / 20, -0.25], [-0.25, 1.5 + rho / 4]], dtype=complex)


def relation_row(tau: SiegelMatrix, weights: Sequence[complex], row: Optional[int] = None) -> np.ndarray:
    """weights . [I tau], or row `row` of [I tau] when weights is empty"""
    g = tau.genus
    full = np.hstack([np.eye(g), tau.tau])
    if row is not None:
        return full[row]
    return np.asarray(weights, dtype=complex) @ full


def weights_from_periods(b_row: Sequence[complex], limit: int = 1000) -> Tuple[complex, ...]:
    """
    Relation weights of one differential for tau = B^-1 A.

    [I tau] = B^-1 [B A], so B_k . [I tau] is the k-th period row; the
    B-row is scaled to a leading -1 and snapped to Q + Q rho.
    """
    row = np.asarray(b_row, dtype=complex)
    if abs(row[0]) == 0:
        raise ThetaError("B-period row starts with zero; cannot normalize the relation weights")
    weights = []
    for value in -row / row[0]:
        beta = _rational(2 * value.imag / np.sqrt(3), limit)
        alpha = _rational(value.real + value.imag / np.sqrt(3), limit)
        weights.append(float(alpha) + float(beta) * RHO)
    return tuple(weights)


def _stage1_transform(m: sp.Matrix, stage1_transform: Optional[Any]) -> Tuple[IntSymplectic, sp.Matrix, sp.Matrix, str]:
    """(S, row_op, standard, source): the stored S when m S normalizes, else the computed one"""
    candidate = HALPHEN_STAGE1_S if stage1_transform is None else stage1_transform
    try:
        S = IntSymplectic(sp.Matrix(candidate))
        row_op, standard = normalize_rows(m * S.matrix)
        return S, row_op, standard, "stored"
    except SymplecticError as e:
        logger.warning(f"Stored stage-1 transform rejected ({e}); computing the standard form")
    result = standard_form(m)
    return result.S, result.row_op, result.standard, "computed"


def genus3_reduction_chain(tau: Any, relation_weights: Sequence[complex] = HALPHEN_RELATION_WEIGHTS,
                           stage1_transform: Optional[Any] = None) -> List[ReductionCertificate]:
    """
    Two-stage Martens reduction of the Halphen tau.

    Stage 1 reads the relation matrix M off relation_weights . [I tau] and
    applies S (m S in standard form after a row operation). Stage 2 rescales
    the lower 2 x 2 block of tau~ by diag(h1, 1), reads its relation from the
    first row of [I tau2] and reduces it with a computed standard form.
    """
    tau = SiegelMatrix.of(tau)
    if tau.genus != 3:
        raise ThetaError(f"The Halphen chain needs a genus-3 tau, got genus {tau.genus}")

    stored = np.asarray(HALPHEN_RELATION_WEIGHTS)
    if len(relation_weights) != 3 or np.abs(np.asarray(relation_weights, dtype=complex) - stored).max() > 1e-9:
        logger.warning(f"Relation weights {relation_weights} differ from the stored {HALPHEN_RELATION_WEIGHTS}")
    relation = pi_relation(relation_row(tau, relation_weights))
    m = relation.m
    if m != sp.Matrix(HALPHEN_M):
        logger.warning(f"Relation matrix {m.tolist()} differs from the stored {HALPHEN_M}")
    S, row_op, standard, source = _stage1_transform(m, stage1_transform)
    T = S.inverse()
    first = ReductionCertificate(
        stage=1,
        m=m,
        hopf=hopf_number(m),
        transform=T,
        standard_form=standard,
        row_op=row_op,
        tau_before=tau,
        tau_after=transform_tau(tau, T),
        transform_source=source,
        relation=relation,
    )

    h1 = first.hopf
    scale = np.diag([float(h1), 1.0])
    tau2 = SiegelMatrix(scale @ first.tau_after.tau[1:, 1:] @ scale)
    relation2 = pi_relation(relation_row(tau2, (), row=0))
    reduced = standard_form(relation2.m)
    second = ReductionCertificate(
        stage=2,
        m=relation2.m,
        hopf=reduced.hopf,
        transform=reduced.transform,
        standard_form=reduced.standard,
        row_op=reduced.row_op,
        tau_before=tau2,
        tau_after=transform_tau(tau2, reduced.transform),
        transform_source="computed",
        relation=relation2,
    )
    certificates = [first, second]
    logger.info(f"Halphen reduction: hopf {first.hopf} then {second.hopf}, "
                f"breadth {decomposition_breadth(certificates)}")
    return certificates
