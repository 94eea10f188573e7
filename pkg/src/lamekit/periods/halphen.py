"""
Periods of the Halphen curve w^3 = (z^2 - l1^2)(z^2 + l2^2).

Every cycle integral is assembled from twelve legs e[i, s]: the integral
from 0 to the branch point B_i on sheet s, for the basis dz/w, dz/w^2,
z dz/w^2. On the curve the sheets differ by the deck transformation
w -> rho w, so the b-cycles are the a-cycles shifted down one sheet, up to
the sign pattern H = diag(1, 1, -1).
"""

import cmath
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from ..algebra import MultiPoly
from ..config import get_settings
from ..config.settings import PeriodSettings, QuadratureSettings
from ..curves import PlaneCurve, holomorphic_basis
from ..exceptions import PeriodError
from .models import PeriodData, PeriodResiduals, SegmentIntegralSet, encode_complex
from .quadrature import NumericCurve, form_of, integrate_forms
from .residuals import riemann_residuals, select_tau

RHO = cmath.exp(2j * cmath.pi / 3)
SHEETS = 3
CYCLE_SIGNS = np.diag([1.0, 1.0, -1.0])

Leg = Tuple[int, int]
Cycle = Mapping[Leg, int]

# a-cycles as signed sums of legs (branch point index, sheet)
A_CYCLES: Tuple[Dict[Leg, int], ...] = (
    {(1, 1): 1, (1, 0): -1, (2, 0): 1, (2, 1): -1},
    {(3, 1): 1, (3, 0): -1, (4, 0): 1, (4, 1): -1},
    {(1, 1): 1, (1, 2): -1, (2, 2): 1, (2, 0): -1, (4, 0): 1, (4, 2): -1, (3, 2): 1, (3, 1): -1},
)


def b_cycle(index: int) -> Dict[Leg, int]:
    """H_kk times the a-cycle moved down one sheet"""
    sign = int(CYCLE_SIGNS[index, index])
    return {(point, (sheet - 1) % SHEETS): sign * c for (point, sheet), c in A_CYCLES[index].items()}


B_CYCLES: Tuple[Dict[Leg, int], ...] = tuple(b_cycle(k) for k in range(3))


def branch_points(lambda1: float, lambda2: float) -> Dict[int, complex]:
    return {1: complex(lambda1), 2: 1j * lambda2, 3: complex(-lambda1), 4: -1j * lambda2}


def halphen_curve() -> PlaneCurve:
    z = MultiPoly.var("z")
    l1, l2 = MultiPoly.var("l1"), MultiPoly.var("l2")
    return PlaneCurve(3, (z * z - l1 * l1) * (z * z + l2 * l2), "halphen")


def lambda2_for_ratio(lambda1: float, ratio: float) -> float:
    """lambda2 with lambda2^2 / lambda1^2 = ratio"""
    return float(lambda1 * np.sqrt(float(ratio)))


@dataclass
class HalphenPeriods:
    lambdas: Tuple[float, float]
    data: PeriodData
    integrals: SegmentIntegralSet
    legs: Dict[Leg, np.ndarray]
    closed_form: np.ndarray
    closed_form_residual: float
    x_relations: Dict[str, float]
    error_estimate: float

    @property
    def x(self) -> np.ndarray:
        return self.data.A_periods[0]

    def relation_row(self) -> np.ndarray:
        """First row of [B A]: the du1 periods over b- then a-cycles"""
        return np.concatenate([self.data.B_periods[0], self.data.A_periods[0]])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda1": self.lambdas[0],
            "lambda2": self.lambdas[1],
            "periods": self.data.to_dict(),
            "integrals": self.integrals.to_dict(),
            "closed_form": encode_complex(self.closed_form),
            "closed_form_residual": self.closed_form_residual,
            "x_relations": dict(self.x_relations),
            "error_estimate": self.error_estimate,
        }


def leg_integrals(lambda1: float, lambda2: float,
                  settings: Optional[QuadratureSettings] = None) -> Tuple[Dict[Leg, np.ndarray], float]:
    """All twelve legs for the three basis differentials"""
    curve = halphen_curve()
    parameters = {"l1": lambda1, "l2": lambda2}
    numeric = NumericCurve.from_curve(curve, parameters)
    forms = [form_of(d, parameters) for d in holomorphic_basis(curve)]
    legs: Dict[Leg, np.ndarray] = {}
    error = 0.0
    for point, target in branch_points(lambda1, lambda2).items():
        for sheet in range(SHEETS):
            result = integrate_forms(numeric, forms, [0.0, target], sheet, settings)
            legs[(point, sheet)] = result.values
            error += result.error
    return legs, error


def cycle_periods(legs: Mapping[Leg, np.ndarray], cycles: Tuple[Cycle, ...]) -> np.ndarray:
    """Rows: differentials; columns: cycles"""
    columns = [sum(c * legs[leg] for leg, c in cycle.items()) for cycle in cycles]
    return np.array(columns, dtype=complex).T


def closed_form_tau(x: np.ndarray) -> np.ndarray:
    """rho H + (rho^2 - rho) x x^T / (x^T H x)"""
    x = np.asarray(x, dtype=complex)
    return RHO * CYCLE_SIGNS + (RHO ** 2 - RHO) * np.outer(x, x) / (x @ CYCLE_SIGNS @ x)


def tau_candidates(P_a: np.ndarray, P_b: np.ndarray) -> Dict[str, np.ndarray]:
    inverse = np.linalg.inv
    candidates = {
        "B^-1 A": inverse(P_b) @ P_a,
        "A^-1 B": inverse(P_a) @ P_b,
        "A B^-1": P_a @ inverse(P_b),
        "B A^-1": P_b @ inverse(P_a),
    }
    candidates.update({f"({name})^T": value.T for name, value in list(candidates.items())})
    return candidates


def x_relations(x: np.ndarray, I: complex, J: complex) -> Dict[str, float]:
    """Residuals of x1 = (rho^2 - 1)(I - J), x2 = -x1, x3 = -2J + 2 rho (J - I) + 2 rho^2 I"""
    x1 = (RHO ** 2 - 1) * (I - J)
    x3 = -2 * J + 2 * RHO * (J - I) + 2 * RHO ** 2 * I
    return {
        "x1": float(abs(x[0] - x1)),
        "x2": float(abs(x[1] + x[0])),
        "x3": float(abs(x[2] - x3)),
    }


def genus3_periods(lambda1: Optional[float] = None, lambda2: Optional[float] = None,
                   settings: Optional[PeriodSettings] = None,
                   quadrature: Optional[QuadratureSettings] = None) -> HalphenPeriods:
    """
    Period matrix of the Halphen curve.

    Defaults: lambda1 from settings and lambda2 from the configured ratio
    lambda2^2 / lambda1^2.
    """
    settings = settings or get_settings().periods
    lambda1 = settings.lambda1 if lambda1 is None else float(lambda1)
    lambda2 = lambda2_for_ratio(lambda1, settings.halphen_ratio) if lambda2 is None else float(lambda2)
    if lambda1 <= 0 or lambda2 <= 0:
        raise PeriodError(f"Halphen periods need positive lambda1, lambda2, got ({lambda1}, {lambda2})")

    legs, error = leg_integrals(lambda1, lambda2, quadrature)
    P_a = cycle_periods(legs, A_CYCLES)
    P_b = cycle_periods(legs, B_CYCLES)
    I, J = complex(legs[(1, 0)][0]), complex(legs[(2, 0)][0])
    integrals = SegmentIntegralSet({
        "I": I,
        "J": J,
        "I_du2": complex(legs[(1, 0)][1]),
        "J_du2": complex(legs[(2, 0)][1]),
        "I_du3": complex(legs[(1, 0)][2]),
        "J_du3": complex(legs[(2, 0)][2]),
    })

    candidates = tau_candidates(P_a, P_b)
    name, tau, table = select_tau(candidates, settings.tau_tol)
    data = PeriodData(3, P_a, P_b, tau, PeriodResiduals(0.0, 0.0), name, table, CYCLE_SIGNS)
    data.residuals = riemann_residuals(data, candidates[name])
    if data.residuals.bilinear > settings.bilinear_tol * max(1.0, float(np.abs(P_a).max()) ** 2):
        raise PeriodError(f"Riemann bilinear residual {data.residuals.bilinear:.2e} above tolerance")

    closed = closed_form_tau(P_a[0])
    residual = float(np.abs(closed - tau).max())
    relations = x_relations(P_a[0], I, J)
    logger.info(f"Halphen periods for lambda=({lambda1}, {lambda2}): {name}, "
                f"bilinear {data.residuals.bilinear:.2e}, closed form {residual:.2e}")
    return HalphenPeriods((lambda1, lambda2), data, integrals, legs, closed, residual, relations, error)


def b_period_structure(P_a: np.ndarray, P_b: np.ndarray) -> float:
    """max deviation of B from (rho H x, rho^2 H b, rho^2 H c)"""
    multipliers = np.array([RHO, RHO ** 2, RHO ** 2])[:, None]
    expected = multipliers * (P_a @ CYCLE_SIGNS)
    return float(np.abs(P_b - expected).max())


def bilinear_pair(P_a: np.ndarray) -> List[float]:
    """[|x^T H b|, |x^T H c|]"""
    x = P_a[0]
    return [float(abs(x @ CYCLE_SIGNS @ P_a[1])), float(abs(x @ CYCLE_SIGNS @ P_a[2]))]
