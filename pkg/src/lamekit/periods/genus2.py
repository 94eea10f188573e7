"""
Periods of the genus-2 Lamé curve w^2 = (z^2 - xi1^2)(z^2 - xi2^2)(z^2 - xi3^2).

The four half-periods come from complete elliptic integrals of the two
quotient curves w1^2 = prod(x - xi_i^2) and w2^2 = x prod(x - xi_i^2).
A second, independent pipeline integrates dz/w and z dz/w directly on the
genus-2 curve and must agree with the K-formulas.
"""

import cmath
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..algebra import MultiPoly
from ..config import get_settings
from ..config.settings import PeriodSettings, QuadratureSettings
from ..curves import PlaneCurve, holomorphic_basis
from ..exceptions import PeriodError
from .elliptic import elliptic_K
from .models import PeriodData, PeriodResiduals, SegmentIntegralSet, complex_pair
from .quadrature import NumericCurve, form_of, integrate_forms
from .residuals import riemann_residuals, select_tau

# tau -> U tau U^T brings the winning quotient to the block shape [[2s, s], [s, r/2 + s/2]]
BLOCK_BASIS = np.array([[0, 1], [-1, 0]], dtype=float)


def _validate(xi: Tuple[float, float, float]) -> Tuple[float, float, float]:
    xi1, xi2, xi3 = (float(x) for x in xi)
    if not 0 < xi1 < xi2 < xi3:
        raise PeriodError(f"Genus-2 periods need 0 < xi1 < xi2 < xi3, got {xi}")
    return xi1, xi2, xi3


def omega_values(xi1: float, xi2: float, xi3: float) -> SegmentIntegralSet:
    """omega1, omega1', omega2, omega2' from the K-expressions"""
    a, b, c = xi1 ** 2, xi2 ** 2, xi3 ** 2
    root = cmath.sqrt(c - a)
    root_b = cmath.sqrt((c - a) * b)
    return SegmentIntegralSet({
        "omega1": 2j * elliptic_K(cmath.sqrt((c - b) / (c - a))) / root,
        "omega1p": 2 * elliptic_K(cmath.sqrt((b - a) / (c - a))) / root,
        "omega2": 2j * elliptic_K(cmath.sqrt((c - b) * a / ((c - a) * b))) / root_b,
        "omega2p": 2 * elliptic_K(cmath.sqrt((b - a) * c / ((c - a) * b))) / root_b,
    })


def period_blocks(omegas: SegmentIntegralSet) -> Tuple[np.ndarray, np.ndarray]:
    """Omega (a-periods) and Omega' (b-periods); rows are dz/w and z dz/w"""
    w1, w1p, w2, w2p = omegas["omega1"], omegas["omega1p"], omegas["omega2"], omegas["omega2p"]
    omega = np.array([[-w2 / 2, w2], [w1, 0]], dtype=complex)
    omega_prime = np.array([[0, w2p / 2], [w1p, w1p / 2]], dtype=complex)
    return omega, omega_prime


def tau_candidates(omega: np.ndarray, omega_prime: np.ndarray) -> Dict[str, np.ndarray]:
    inverse = np.linalg.inv
    return {
        "Omega^-1 Omega'": inverse(omega) @ omega_prime,
        "Omega'^-1 Omega": inverse(omega_prime) @ omega,
        "(Omega^-1 Omega')^T": (inverse(omega) @ omega_prime).T,
        "(Omega'^-1 Omega)^T": (inverse(omega_prime) @ omega).T,
    }


@dataclass
class ContourCheck:
    """Direct contour integration on the genus-2 curve against the K-formulas"""

    omegas: SegmentIntegralSet
    max_deviation: float
    omega22: float
    a2_identity: float
    error_estimate: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "omegas": self.omegas.to_dict(),
            "max_deviation": self.max_deviation,
            "omega22": self.omega22,
            "a2_identity": self.a2_identity,
            "error_estimate": self.error_estimate,
        }


@dataclass
class Genus2Periods:
    xi: Tuple[float, float, float]
    data: PeriodData
    integrals: SegmentIntegralSet
    raw_tau: np.ndarray
    tau1: complex
    tau2: complex
    shape_residual: float
    contour: Optional[ContourCheck] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "xi": list(self.xi),
            "periods": self.data.to_dict(),
            "integrals": self.integrals.to_dict(),
            "tau1": complex_pair(self.tau1),
            "tau2": complex_pair(self.tau2),
            "shape_residual": self.shape_residual,
            "contour": self.contour.to_dict() if self.contour else None,
        }


def genus2_curve() -> PlaneCurve:
    """w^2 = (z^2 - a1)(z^2 - a2)(z^2 - a3) with the squares a_i as parameters"""
    z = MultiPoly.var("z")
    p = MultiPoly.constant(1)
    for name in ("a1", "a2", "a3"):
        p = p * (z * z - MultiPoly.var(name))
    return PlaneCurve(2, p, "lame-genus2")


def genus2_contour_periods(xi1: float, xi2: float, xi3: float, reference: Optional[SegmentIntegralSet] = None,
                           settings: Optional[QuadratureSettings] = None) -> ContourCheck:
    """
    omega1 = 2 int_{xi2}^{xi3} z dz/w and omega2 = 2 int_{xi2}^{xi3} dz/w with
    w = -i sqrt|P| on (xi2, xi3); the primed values are the same integrals over
    (xi1, xi2) with w = +sqrt(P).
    """
    xi1, xi2, xi3 = _validate((xi1, xi2, xi3))
    curve = genus2_curve()
    parameters = {"a1": xi1 ** 2, "a2": xi2 ** 2, "a3": xi3 ** 2}
    numeric = NumericCurve.from_curve(curve, parameters)
    dz_w, z_dz_w = holomorphic_basis(curve)
    forms = [form_of(dz_w, parameters), form_of(z_dz_w, parameters)]

    def between(start: float, end: float, sheet: int) -> Tuple[np.ndarray, float]:
        middle = (start + end) / 2
        upper = integrate_forms(numeric, forms, [middle, end], sheet, settings)
        lower = integrate_forms(numeric, forms, [middle, start], sheet, settings)
        return upper.values - lower.values, upper.error + lower.error

    outer, outer_error = between(xi2, xi3, 1)
    inner, inner_error = between(xi1, xi2, 0)
    omegas = SegmentIntegralSet({
        "omega1": 2 * outer[1],
        "omega1p": 2 * inner[1],
        "omega2": 2 * outer[0],
        "omega2p": 2 * inner[0],
    })

    right = integrate_forms(numeric, forms, [0.0, xi1], 1, settings)
    left = integrate_forms(numeric, forms, [0.0, -xi1], 1, settings)
    omega22 = abs(2 * right.values[1] - 2 * left.values[1])
    a2_identity = abs(2 * right.values[0] - omegas["omega2"])

    deviation = 0.0
    if reference is not None:
        deviation = max(abs(omegas[name] - reference[name]) for name in reference)
    error = outer_error + inner_error + right.error + left.error
    logger.debug(f"Genus-2 contour periods: deviation {deviation:.2e}, Omega22 {omega22:.2e}, a2 {a2_identity:.2e}")
    return ContourCheck(omegas, float(deviation), float(omega22), float(a2_identity), float(error))


def genus2_periods(xi1: float, xi2: float, xi3: float, contour_check: bool = True,
                   settings: Optional[PeriodSettings] = None) -> Genus2Periods:
    """
    Period matrix of the genus-2 Lamé curve.

    tau is the symmetric, positive-imaginary quotient of Omega and Omega',
    presented in the basis where it reads [[2 tau1, tau1], [tau1, tau2/2 + tau1/2]]
    with tau1 = omega2/omega2' and tau2 = 2 omega1/omega1'.
    """
    xi = _validate((xi1, xi2, xi3))
    settings = settings or get_settings().periods
    omegas = omega_values(*xi)
    omega, omega_prime = period_blocks(omegas)

    candidates = tau_candidates(omega, omega_prime)
    name, raw_tau, table = select_tau(candidates, settings.tau_tol)
    tau = BLOCK_BASIS @ raw_tau @ BLOCK_BASIS.T
    tau1 = omegas["omega2"] / omegas["omega2p"]
    tau2 = 2 * omegas["omega1"] / omegas["omega1p"]
    shape = np.array([[2 * tau1, tau1], [tau1, tau2 / 2 + tau1 / 2]])
    shape_residual = float(np.abs(tau - shape).max())

    data = PeriodData(2, omega, omega_prime, tau, PeriodResiduals(0.0, 0.0), f"{name}, block basis U tau U^T", table)
    data.residuals = riemann_residuals(data, BLOCK_BASIS @ candidates[name] @ BLOCK_BASIS.T)

    contour = None
    if contour_check:
        contour = genus2_contour_periods(*xi, reference=omegas)
        if contour.max_deviation > 1e-9:
            raise PeriodError(f"Contour periods disagree with the K-formulas by {contour.max_deviation:.2e}")

    logger.info(f"Genus-2 periods for xi={xi}: {name}, tau1={tau1:.10g}, tau2={tau2:.10g}")
    return Genus2Periods(xi, data, omegas, raw_tau, complex(tau1), complex(tau2), shape_residual, contour)
