"""
Tests for elliptic integrals, branch-tracked quadrature and the period matrices.
"""

import cmath
import math
import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.config.settings import PeriodSettings
from lamekit.exceptions import BranchPointClearanceError, PeriodError, QuadratureError
from lamekit.periods import (
    NumericCurve,
    PeriodData,
    PeriodResiduals,
    SegmentIntegralSet,
    decode_complex,
    elliptic_K,
    elliptic_K_quad,
    encode_complex,
    genus2_periods,
    genus3_periods,
    integrate_forms,
    monodromy_factor,
    random_moduli,
    reference_root,
    riemann_residuals,
    select_tau,
)
from lamekit.periods.genus2 import omega_values
from lamekit.periods.halphen import RHO, b_period_structure, bilinear_pair, closed_form_tau, halphen_curve
from lamekit.periods.quadrature import Form
from lamekit.periods.residuals import bilinear_residual, positivity, symmetry_residual
from lamekit.theta import weights_from_periods
from lamekit.theta.reduction import HALPHEN_RELATION_WEIGHTS

HALPHEN_TAU = np.array([
    [62 * RHO - 13, 17 * RHO + 13, -5 * RHO + 38],
    [17 * RHO + 13, 62 * RHO - 13, 5 * RHO - 38],
    [-5 * RHO + 38, 5 * RHO - 38, 45 * RHO + 53],
]) / 79


class TestEllipticK:
    """Test the AGM evaluation of K."""

    def test_zero_modulus(self):
        assert abs(elliptic_K(0.0) - math.pi / 2) < 1e-15

    def test_lemniscatic(self):
        """K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi))"""
        expected = math.gamma(0.25) ** 2 / (4 * math.sqrt(math.pi))
        assert abs(elliptic_K(1 / math.sqrt(2)) - expected) < 1e-14

    def test_agm_matches_quadrature(self):
        """50 real and 50 complex seeded moduli agree with the scipy oracle"""
        moduli = random_moduli(np.random.default_rng(7), 100)
        assert np.all(np.abs(moduli) < 1) and np.count_nonzero(moduli.imag) == 50
        worst = max(abs(elliptic_K(k) - elliptic_K_quad(k)) for k in moduli)
        assert worst < 1e-11

    def test_divergent(self):
        with pytest.raises(PeriodError):
            elliptic_K(1.0)


class TestQuadrature:
    """Test contour quadrature with branch tracking."""

    @pytest.fixture
    def sqrt_curve(self):
        """w^2 = z"""
        return NumericCurve(2, [0.0], label="sqrt")

    @pytest.fixture
    def dz_over_w(self):
        return Form(np.array([1.0 + 0j]), 1, "dz/w")

    def test_reference_root(self):
        assert reference_root(4.0, 2) == 2.0
        assert reference_root(-8.0, 3) == -2.0
        assert abs(reference_root(-4.0, 2) - 2j) < 1e-15

    def test_regular_segment(self, sqrt_curve, dz_over_w):
        """int_1^4 dz / sqrt(z) = 2"""
        result = integrate_forms(sqrt_curve, [dz_over_w], [1.0, 4.0])
        assert abs(result.value - 2.0) < 1e-12
        assert abs(result.w_end - 2.0) < 1e-12

    def test_other_sheet(self, sqrt_curve, dz_over_w):
        result = integrate_forms(sqrt_curve, [dz_over_w], [1.0, 4.0], sheet=1)
        assert abs(result.value + 2.0) < 1e-12

    def test_branch_point_end(self, sqrt_curve, dz_over_w):
        """int_1^0 dz / sqrt(z) = -2 with the singular endpoint"""
        result = integrate_forms(sqrt_curve, [dz_over_w], [1.0, 0.0])
        assert result.singular_end
        assert abs(result.value + 2.0) < 1e-11

    def test_polyline_around_branch_point(self, sqrt_curve, dz_over_w):
        """Half a turn from 1 to -1 through i gives 2 sqrt(-1) - 2 = 2i - 2"""
        result = integrate_forms(sqrt_curve, [dz_over_w], [1.0, 1.0 + 1j, -1.0 + 1j, -1.0])
        assert abs(result.value - (2j - 2)) < 1e-11
        assert abs(result.w_end - 1j) < 1e-12

    def test_clearance(self, sqrt_curve, dz_over_w):
        with pytest.raises(BranchPointClearanceError):
            integrate_forms(sqrt_curve, [dz_over_w], [-1.0, 1.0])

    def test_non_integrable_end(self, sqrt_curve):
        with pytest.raises(QuadratureError):
            integrate_forms(sqrt_curve, [Form(np.array([1.0 + 0j]), 2)], [1.0, 0.0])

    def test_short_path(self, sqrt_curve, dz_over_w):
        with pytest.raises(QuadratureError):
            integrate_forms(sqrt_curve, [dz_over_w], [1.0])

    def test_monodromy_square_root(self, sqrt_curve):
        assert abs(monodromy_factor(sqrt_curve, 0.0, 1.0) + 1) < 1e-10

    def test_monodromy_trivial(self, sqrt_curve):
        assert abs(monodromy_factor(sqrt_curve, 5.0, 1.0) - 1) < 1e-10

    def test_monodromy_cube_root(self):
        """Around a simple branch point of a trigonal curve w picks up rho or rho^2"""
        curve = NumericCurve.from_curve(halphen_curve(), {"l1": 1.0, "l2": 0.5})
        factor = monodromy_factor(curve, 1.0, 0.2)
        assert abs(factor ** 3 - 1) < 1e-10
        assert min(abs(factor - RHO), abs(factor - RHO ** 2)) < 1e-10


class TestResiduals:
    """Test residual helpers and tau selection."""

    def test_symmetry(self):
        assert symmetry_residual([[1, 2], [2, 1]]) == 0.0
        assert symmetry_residual([[1, 2], [3, 1]]) == 1.0

    def test_positivity(self):
        assert positivity(1j * np.eye(2)) == pytest.approx(1.0)

    def test_bilinear_without_signs(self):
        A = np.eye(2, dtype=complex)
        assert bilinear_residual(A, 1j * np.eye(2)) == 0.0

    def test_select_first_valid(self):
        candidates = {
            "asymmetric": np.array([[1j, 1], [0, 1j]]),
            "lower half": -1j * np.eye(2),
            "good": 1j * np.eye(2) + 0.1,
        }
        name, tau, table = select_tau(candidates, 1e-8)
        assert name == "good"
        assert set(table) == set(candidates)

    def test_select_none(self):
        with pytest.raises(PeriodError):
            select_tau({"bad": -1j * np.eye(2)}, 1e-8)

    def test_reported_symmetry_uses_raw_candidate(self):
        """A nearly symmetric winner keeps its asymmetry in the residuals"""
        raw = np.array([[1j, 0.2 + 1e-9], [0.2, 1j]])
        name, tau, _ = select_tau({"near": raw}, 1e-8)
        data = PeriodData(2, np.eye(2), np.eye(2), tau, PeriodResiduals(0.0, 0.0), name)
        assert symmetry_residual(tau) == 0.0
        assert riemann_residuals(data).symmetry == 0.0
        assert riemann_residuals(data, raw).symmetry == pytest.approx(1e-9, rel=1e-6)


class TestComplexCodec:
    """Test the [re, im] JSON convention."""

    def test_matrix(self):
        tau = np.array([[1 + 2j, 0.5], [0.5, 3j]])
        decoded = decode_complex(encode_complex(tau))
        assert np.array_equal(decoded, tau)

    def test_scalar(self):
        assert encode_complex(1 - 1j) == [1.0, -1.0]

    def test_non_finite(self):
        with pytest.raises(ValueError):
            SegmentIntegralSet({"I": complex("nan")})


class TestGenus2Periods:
    """Test the genus-2 Lamé period matrix."""

    @pytest.fixture(scope="class")
    def periods(self):
        return genus2_periods(1.0, 2.0, 3.0)

    def test_contour_agrees_with_k_formulas(self, periods):
        assert periods.contour.max_deviation < 1e-9

    def test_omega22(self, periods):
        assert periods.contour.omega22 < 1e-11

    def test_a2_identity(self, periods):
        assert periods.contour.a2_identity < 1e-9

    def test_block_shape(self, periods):
        assert periods.shape_residual < 1e-9
        tau = periods.data.tau
        assert abs(tau[0, 0] - 2 * periods.tau1) < 1e-9
        assert abs(tau[0, 1] - periods.tau1) < 1e-9

    def test_siegel(self, periods):
        assert periods.data.residuals.symmetry < 1e-10
        assert periods.data.residuals.positivity > 0

    def test_half_periods(self):
        """omega1, omega2 are imaginary and the primed ones real for real xi"""
        omegas = omega_values(1.0, 2.0, 3.0)
        assert abs(omegas["omega1"].real) < 1e-14 and abs(omegas["omega2"].real) < 1e-14
        assert abs(omegas["omega1p"].imag) < 1e-14 and abs(omegas["omega2p"].imag) < 1e-14

    def test_other_xi(self):
        result = genus2_periods(0.5, 1.3, 2.1)
        assert result.contour.max_deviation < 1e-9
        assert result.shape_residual < 1e-9

    def test_ordering(self):
        with pytest.raises(PeriodError):
            genus2_periods(2.0, 1.0, 3.0)

    def test_to_dict(self, periods):
        data = periods.to_dict()
        assert data["xi"] == [1.0, 2.0, 3.0]
        assert len(data["tau1"]) == 2


@pytest.mark.slow
class TestHalphenPeriods:
    """Test the Halphen period matrix at lambda2^2 / lambda1^2 = 5/27."""

    @pytest.fixture(scope="class")
    def periods(self):
        return genus3_periods()

    def test_i_j_relation(self, periods):
        I, J = periods.integrals["I"], periods.integrals["J"]
        assert abs(I + J * (1 + 2 * RHO) / 3) < 1e-10

    def test_x_relations(self, periods):
        assert max(periods.x_relations.values()) < 1e-10

    def test_bilinear(self, periods):
        assert periods.data.residuals.bilinear < 1e-9
        assert max(bilinear_pair(periods.data.A_periods)) < 1e-9

    def test_tau(self, periods):
        assert periods.data.convention == "B^-1 A"
        assert np.abs(periods.data.tau - HALPHEN_TAU).max() < 1e-8

    def test_closed_form(self, periods):
        assert periods.closed_form_residual < 1e-8
        assert np.abs(closed_form_tau(periods.x) - HALPHEN_TAU).max() < 1e-8

    def test_b_periods_from_deck_transformation(self, periods):
        assert b_period_structure(periods.data.A_periods, periods.data.B_periods) < 1e-9

    def test_relation_row(self, periods):
        row = periods.relation_row()
        assert row.shape == (6,)

    def test_relation_weights(self, periods):
        weights = weights_from_periods(periods.data.B_periods[0])
        assert np.abs(np.array(weights) - np.array(HALPHEN_RELATION_WEIGHTS)).max() < 1e-12

    def test_scaling_invariance(self, periods):
        """tau depends on the ratio only"""
        scaled = genus3_periods(2.0, 2.0 * math.sqrt(5 / 27))
        assert np.abs(scaled.data.tau - periods.data.tau).max() < 1e-8

    def test_rejects_non_positive(self):
        with pytest.raises(PeriodError):
            genus3_periods(-1.0, 0.5)

    def test_settings_override(self):
        settings = PeriodSettings(lambda1=1.0)
        result = genus3_periods(settings=settings)
        assert result.lambdas[1] == pytest.approx(math.sqrt(5 / 27))

    def test_rho(self):
        assert abs(RHO - cmath.exp(2j * cmath.pi / 3)) == 0
