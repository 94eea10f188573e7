"""
Acceptance suite behind `lamekit check all`.

Each check returns a list of assertions; a check that raises is recorded as
one failed assertion carrying the error, so a single broken case never hides
the others.
"""

import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger

from ..algebra import MultiPoly, parse_expression, reduce_e
from ..config import get_settings
from ..covers import load_catalog, search_cover, verify_cover, verify_differential
from ..exceptions import LamekitError
from ..lame import band_edges, lame_curve
from ..periods import (
    NumericCurve,
    elliptic_K,
    elliptic_K_quad,
    genus2_periods,
    genus3_periods,
    monodromy_factor,
    random_moduli,
)
from ..periods.halphen import RHO, halphen_curve
from ..theta import (
    decomposition_breadth,
    genus2_certificate,
    genus3_reduction_chain,
    hopf_number,
    theta,
    verify_genus2_reduction,
    weights_from_periods,
)
from ..theta.reduction import (
    GENUS2_M,
    HALPHEN_M,
    HALPHEN_RELATION_WEIGHTS,
    HALPHEN_STAGE1_S,
    PRINTED_STAGE1_ROW_OP,
    PRINTED_STAGE1_STANDARD,
    expected_genus2_tau_tilde,
    expected_halphen_stage1,
    expected_halphen_stage2,
)
from .report import Assertion, RunReport

# f_s and f_i of the Lamé spectral curve, n = 1..5
LAME_FACTOR_TABLE = {
    1: ("1", "z - e"),
    2: ("z**2 - 3*g2", "z + 3*e"),
    3: ("z", "z**2 - 6*z*e + 45*e**2 - 15*g2"),
    4: ("z**3 - 52*g2*z + 560*g3", "z**2 + 10*z*e - 7*g2 - 35*e**2"),
    5: ("z**2 - 27*g2", "z**3 - 15*z**2*e + (315*e**2 - 132*g2)*z + 675*e**3 + 540*g3"),
}

# search templates against the catalog entries whose verified targets they must recover
SEARCH_CASES = {"table-n2": "cubic-in-z", "table-n3": "cubic-in-z"}


def halphen_reference_tau(rho: complex = RHO) -> np.ndarray:
    """Closed form of the Halphen tau at lambda2^2 / lambda1^2 = 5/27"""
    return np.array([
        [62 * rho - 13, 17 * rho + 13, -5 * rho + 38],
        [17 * rho + 13, 62 * rho - 13, 5 * rho - 38],
        [-5 * rho + 38, 5 * rho - 38, 45 * rho + 53],
    ], dtype=complex) / 79


def _poly(text: str) -> MultiPoly:
    return MultiPoly.from_expr(parse_expression(text))


def check_lame_table() -> List[Assertion]:
    assertions = []
    for n, (f_s, f_i) in LAME_FACTOR_TABLE.items():
        result = lame_curve(n)
        assertions.append(Assertion.exact(f"lame.n{n}.f_s", result.f_s == _poly(f_s), f"got {result.f_s}"))
        assertions.append(Assertion.exact(f"lame.n{n}.f_i", result.f_i == reduce_e(_poly(f_i)), f"got {result.f_i}"))
    return assertions


def check_band_edges() -> List[Assertion]:
    tol = get_settings().lame.band_edge_tol
    return [Assertion.at_most(f"lame.n{n}.band_edges", band_edges(n, 4.0, 1.0).max_deviation, tol)
            for n in range(1, 6)]


def check_catalog(path: Optional[Path] = None) -> List[Assertion]:
    cat = load_catalog(path, verify=False)
    assertions = [Assertion.exact("covers.count", cat.count() >= 13, f"{cat.count()} entries")]
    for cover_id, cover in cat.entries.items():
        for result in (verify_cover(cover), verify_differential(cover)):
            detail = "" if result.passed else f"residual {result.to_dict()['residual']}"
            assertions.append(Assertion.exact(f"covers.{cover_id}.{result.check}", result.passed, detail))
    return assertions


def check_search(path: Optional[Path] = None) -> List[Assertion]:
    cat = load_catalog(path, verify=False)
    assertions = []
    for cover_id, template in SEARCH_CASES.items():
        expected = cat.lookup(cover_id)
        found = search_cover(expected.source, template)
        recovered = any(c.target.G2 == expected.target.G2 and c.target.G3 == expected.target.G3 for c in found)
        assertions.append(Assertion.exact(f"search.{cover_id}", recovered,
                                          f"found {[(str(c.target.G2), str(c.target.G3)) for c in found]}"))
    return assertions


def check_genus2_periods() -> List[Assertion]:
    periods = genus2_periods(1.0, 2.0, 3.0, contour_check=True)
    contour = periods.contour
    return [
        Assertion.at_most("genus2.contour_deviation", contour.max_deviation, 1e-9),
        Assertion.at_most("genus2.omega22", contour.omega22, 1e-11),
        Assertion.at_most("genus2.block_shape", periods.shape_residual, 1e-9),
    ]


def check_genus2_reduction(seed: int, eps: float) -> List[Assertion]:
    check = verify_genus2_reduction(1.0, 2.0, 3.0, samples=100, eps=eps, seed=seed)
    periods = genus2_periods(1.0, 2.0, 3.0, contour_check=False)
    certificate = genus2_certificate(periods.data.tau)
    expected = expected_genus2_tau_tilde(periods.tau1, periods.tau2)
    return [
        Assertion.at_most("genus2.theta_splitting", check.max_residual, 1e-10, f"convention {check.convention}"),
        Assertion.exact("genus2.hopf", hopf_number(GENUS2_M) == 2),
        Assertion.exact("genus2.standard_form", certificate.check(), str(certificate.standard_form.tolist())),
        Assertion.at_most("genus2.tau_tilde", float(np.abs(certificate.tau_after.tau - expected).max()), 1e-9),
    ]


def check_halphen_periods() -> Tuple[List[Assertion], np.ndarray, Tuple[complex, ...]]:
    periods = genus3_periods()
    I, J = periods.integrals["I"], periods.integrals["J"]
    tau = periods.data.tau
    weights = weights_from_periods(periods.data.B_periods[0])
    weight_deviation = float(np.abs(np.asarray(weights) - np.asarray(HALPHEN_RELATION_WEIGHTS)).max())
    assertions = [
        Assertion.at_most("halphen.I_J_relation", abs(I + J * (1 + 2 * RHO) / 3), 1e-10),
        Assertion.at_most("halphen.x_relations", max(periods.x_relations.values()), 1e-10),
        Assertion.at_most("halphen.bilinear", periods.data.residuals.bilinear, 1e-9),
        Assertion.at_most("halphen.tau", float(np.abs(tau - halphen_reference_tau()).max()), 1e-8),
        Assertion.at_most("halphen.relation_weights", weight_deviation, 1e-12, str(weights)),
    ]
    return assertions, tau, weights


def check_halphen_reduction(tau: np.ndarray,
                             weights: Sequence[complex] = HALPHEN_RELATION_WEIGHTS) -> List[Assertion]:
    first, second = genus3_reduction_chain(tau, weights)
    printed = sp.Matrix(PRINTED_STAGE1_ROW_OP) * sp.Matrix(HALPHEN_M) * sp.Matrix(HALPHEN_STAGE1_S)
    return [
        Assertion.exact("halphen.hopf", first.hopf == 5 and hopf_number(HALPHEN_M) == 5),
        Assertion.exact("halphen.relation_matrix", first.m == sp.Matrix(HALPHEN_M), str(first.m.tolist())),
        Assertion.exact("halphen.printed_standard_form", printed == sp.Matrix(PRINTED_STAGE1_STANDARD),
                        str(printed.tolist())),
        Assertion.at_most("halphen.stage1_tau",
                          float(np.abs(first.tau_after.tau - expected_halphen_stage1()).max()), 1e-8),
        Assertion.at_most("halphen.stage2_tau",
                          float(np.abs(second.tau_after.tau - expected_halphen_stage2()).max()), 1e-8),
        Assertion.exact("halphen.stage1_factor", first.factor_congruent((1 + RHO) / 5),
                        f"tau~[0,0] = {first.factor_modulus}"),
        Assertion.at_most("halphen.stage2_factor", abs(second.factor_modulus - (11 + RHO) / 20), 1e-8),
        Assertion.exact("halphen.breadth", decomposition_breadth([first, second]) == 20),
    ]


def _random_poly(rng: np.random.Generator, terms: int = 4, degree: int = 3) -> MultiPoly:
    names = ("z", "g2", "e")
    data = {tuple(int(k) for k in rng.integers(0, degree + 1, len(names))):
            Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(terms)}
    return MultiPoly.from_terms(names, data)


def _random_siegel(rng: np.random.Generator, genus: int) -> np.ndarray:
    """Im part A A^T + 0.3 g I, so lambda_min >= 0.3 g"""
    A = rng.normal(size=(genus, genus)) * 0.3
    X = rng.uniform(-0.5, 0.5, (genus, genus))
    return (X + X.T) / 2 + 1j * (A @ A.T + 0.3 * genus * np.eye(genus))


def check_properties(seed: int, eps: float, samples: int = 100, triples: int = 1000) -> List[Assertion]:
    rng = np.random.default_rng(seed)
    evenness, periodicity = 0.0, 0.0
    for _ in range(samples):
        tau = _random_siegel(rng, 2)
        v = rng.uniform(-0.5, 0.5, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        value = theta(v, tau, eps=eps)
        evenness = max(evenness, abs(theta(-v, tau, eps=eps) - value))
        m, n = rng.integers(-1, 2, 2), rng.integers(-2, 3, 2)
        shifted = theta(v + tau @ m + n, tau, eps=eps)
        factor = np.exp(-1j * np.pi * m @ tau @ m - 2j * np.pi * m @ v)
        periodicity = max(periodicity, abs(shifted - factor * value) / max(1.0, abs(value)))

    ring, leibniz = True, True
    for _ in range(triples):
        x, y, w = (_random_poly(rng) for _ in range(3))
        ring = ring and x * y == y * x and (x + y) + w == x + (y + w)
        ring = ring and (x * y) * w == x * (y * w) and x * (y + w) == x * y + x * w
        leibniz = leibniz and (x * y).diff("z") == x.diff("z") * y + x * y.diff("z")

    k_values = random_moduli(rng, samples)
    agm = max(abs(elliptic_K(k) - elliptic_K_quad(k)) for k in k_values)

    curve = NumericCurve.from_curve(halphen_curve(), {"l1": 1.0, "l2": 0.5})
    factor = monodromy_factor(curve, 1.0, 0.2)
    root_of_unity = abs(factor ** 3 - 1) + (1.0 if abs(factor - 1) < 0.5 else 0.0)

    return [
        Assertion.at_most("theta.evenness", evenness, 1e-10),
        Assertion.at_most("theta.quasi_periodicity", periodicity, 1e-10),
        Assertion.exact("algebra.ring_axioms", ring, f"{triples} seeded triples"),
        Assertion.exact("algebra.leibniz", leibniz),
        Assertion.at_most("periods.agm_vs_quadrature", agm, 1e-11, f"{samples} seeded moduli"),
        Assertion.at_most("periods.monodromy", root_of_unity, 1e-10, f"factor {factor}"),
    ]


def _guarded(name: str, check: Callable[[], List[Assertion]]) -> List[Assertion]:
    try:
        return check()
    except LamekitError as e:
        logger.error(f"Check {name} raised: {e}")
        return [Assertion.exact(name, False, f"{type(e).__name__}: {e}")]


def run_checks(seed: Optional[int] = None, eps: Optional[float] = None, catalog_path: Optional[Path] = None,
               skip: Tuple[str, ...] = ()) -> RunReport:
    """Run the acceptance suite; skip names checks to leave out (e.g. 'halphen')"""
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    eps = settings.theta.eps if eps is None else eps
    started = time.perf_counter()

    halphen_tau: Dict[str, Any] = {}

    def halphen_periods() -> List[Assertion]:
        assertions, tau, weights = check_halphen_periods()
        halphen_tau.update(tau=tau, weights=weights)
        return assertions

    def halphen_reduction() -> List[Assertion]:
        if "tau" not in halphen_tau:
            return check_halphen_reduction(halphen_reference_tau())
        return check_halphen_reduction(halphen_tau["tau"], halphen_tau["weights"])

    suite: List[Tuple[str, Callable[[], List[Assertion]]]] = [
        ("lame_table", check_lame_table),
        ("band_edges", check_band_edges),
        ("catalog", lambda: check_catalog(catalog_path)),
        ("search", lambda: check_search(catalog_path)),
        ("genus2_periods", check_genus2_periods),
        ("genus2_reduction", lambda: check_genus2_reduction(seed, eps)),
        ("halphen", halphen_periods),
        ("halphen_reduction", halphen_reduction),
        ("properties", lambda: check_properties(seed, eps)),
    ]

    report = RunReport(command="check all", parameters={"seed": seed, "eps": eps, "settings": settings.to_dict()})
    for number, (name, check) in enumerate(suite, start=1):
        if name in skip:
            continue
        check_started = time.perf_counter()
        assertions = _guarded(name, check)
        report.assertions.extend(assertions)
        elapsed = time.perf_counter() - check_started
        failed = sum(not a.passed for a in assertions)
        report.outputs[name] = {"number": number, "assertions": len(assertions), "failed": failed,
                                "seconds": round(elapsed, 3)}
        logger.info(f"[{number}/{len(suite)}] {name}: {len(assertions) - failed}/{len(assertions)} passed "
                    f"in {elapsed:.1f}s")

    report.residuals = {a.name: a.value for a in report.assertions if a.value is not None}
    report.wall_time = time.perf_counter() - started
    return report
