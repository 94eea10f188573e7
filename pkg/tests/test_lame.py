"""
Tests for Lamé spectral curves, eigenfunctions and the series oracle.
"""

import os
import sys

import numpy as np
import pytest
import sympy as sp

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.algebra import MultiPoly, parse_expression, reduce_e
from lamekit.exceptions import SpectralError
from lamekit.lame import (
    AnsatzKind,
    Prefactor,
    band_edges,
    eigenfunction,
    enumerate_types,
    lame_curve,
    operator_matrix,
    root_type,
    series_residual_check,
    symmetric_type,
    weierstrass_coefficients,
)


def P(text):
    return MultiPoly.from_expr(parse_expression(text))


# Factor table for n = 1..5
FACTOR_TABLE = {
    1: ("1", "z - e"),
    2: ("z**2 - 3*g2", "z + 3*e"),
    3: ("z", "z**2 - 6*z*e + 45*e**2 - 15*g2"),
    4: ("z**3 - 52*g2*z + 560*g3", "z**2 + 10*z*e - 7*g2 - 35*e**2"),
    5: ("z**2 - 27*g2", "z**3 - 15*z**2*e + (315*e**2 - 132*g2)*z + 675*e**3 + 540*g3"),
}


class TestAnsatzTypes:
    """Test enumeration of eigenfunction types."""

    def test_n2_dimensions(self):
        """n=2: symmetric dim 2, root-attached dim 1"""
        types = enumerate_types(2)
        assert [t.dimension for t in types] == [2, 1, 1, 1]
        assert types[1].shape == Prefactor.PAIR

    def test_n3_dimensions(self):
        """n=3: symmetric dim 1 with s1 s2 s3, root-attached dim 2"""
        types = enumerate_types(3)
        assert [t.dimension for t in types] == [1, 2, 2, 2]
        assert types[0].shape == Prefactor.TRIPLE

    def test_n1_symmetric_empty(self):
        """n=1 has no symmetric solutions"""
        types = enumerate_types(1)
        assert types[0].is_empty
        assert types[0].poly_degree is None
        assert all(t.kind == AnsatzKind.ROOT_ATTACHED and t.dimension == 1 for t in types[1:])

    @pytest.mark.parametrize("n", range(1, 11))
    def test_dimension_count(self, n):
        """Dimensions sum to 2n+1"""
        assert sum(t.dimension for t in enumerate_types(n)) == 2 * n + 1

    def test_non_positive(self):
        """n <= 0 is rejected"""
        with pytest.raises(SpectralError):
            enumerate_types(0)


class TestOperatorMatrix:
    """Test matrices of the Lamé operator on ansatz bases."""

    def test_n1_root(self):
        """[e]"""
        matrix = operator_matrix(1, root_type(1))
        assert matrix.entries[0][0] == P("e")

    def test_n2_symmetric(self):
        """[[0, -g2/2], [-6, 0]]"""
        matrix = operator_matrix(2, symmetric_type(2))
        assert matrix.to_sympy() == sp.Matrix([[0, -parse_expression("g2") / 2], [-6, 0]])

    def test_n3_symmetric(self):
        """[0]"""
        matrix = operator_matrix(3, symmetric_type(3))
        assert matrix.entries[0][0].is_zero()

    def test_empty_type(self):
        """Empty types have no matrix"""
        with pytest.raises(SpectralError):
            operator_matrix(1, symmetric_type(1))


class TestLameCurve:
    """Test spectral curve assembly."""

    @pytest.mark.parametrize("n", range(1, 6))
    def test_factor_table(self, n):
        """f_s and f_i reproduce the classical table"""
        result = lame_curve(n)
        f_s, f_i = FACTOR_TABLE[n]
        assert result.f_s == P(f_s)
        assert result.f_i == reduce_e(P(f_i))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_expanded_degree(self, n):
        """Monic of degree 2n+1 without e"""
        result = lame_curve(n)
        assert result.expanded.degree("z") == 2 * n + 1
        assert "e" not in result.expanded.free_variables()
        assert result.expanded.leading_coefficient("z") == 1

    def test_n2_expansion(self):
        """(z^2 - 3 g2)(z^3 - 9 g2 z/4 + 27 g3/4)"""
        result = lame_curve(2)
        assert result.expanded == P("(z**2 - 3*g2)*(z**3 - 9*g2*z/4 + 27*g3/4)")

    def test_n2_tabulated_form(self):
        """4 f(-z) is the displayed n=2 curve"""
        result = lame_curve(2)
        assert result.tabulated_form(4) == P("(z**2 - 3*g2)*(27*g3 - 4*z**3 + 9*g2*z)")

    def test_n3_tabulated_form(self):
        """16 f(-z) is the displayed n=3 curve"""
        expected = P("z*(2376*z**3*g3 - 36450*z*g2*g3 + 504*g2*z**4 - 91125*g3**2 - 16*z**6"
                     " + 3375*g2**3 - 4185*g2**2*z**2)")
        assert lame_curve(3).tabulated_form(16) == expected

    def test_out_of_range(self):
        """n beyond the configured maximum is rejected"""
        with pytest.raises(SpectralError):
            lame_curve(11)
        with pytest.raises(SpectralError):
            lame_curve(0)

    def test_latex(self):
        """LaTeX output names the roots e_i"""
        text = lame_curve(2).to_latex()
        assert "f_s=" in text
        assert "e_{i}" in text
        assert "w^2=" in text

    def test_to_dict(self):
        """JSON payload carries every polynomial"""
        payload = lame_curve(3).to_dict()
        assert payload["n"] == 3
        assert set(payload) >= {"f_s", "f_i", "expanded", "normalization"}
        assert payload["normalization"] == "1/1"


class TestBandEdges:
    """Test the numeric band-edge oracle."""

    @pytest.mark.parametrize("n", range(1, 6))
    def test_roots_match_eigenvalues(self, n):
        """Expanded roots equal the union of type eigenvalues at (g2, g3) = (4, 1)"""
        report = band_edges(n, 4.0, 1.0)
        assert len(report.curve_roots) == 2 * n + 1
        assert len(report.eigenvalues) == 2 * n + 1
        assert report.max_deviation < 1e-9


class TestEigenfunction:
    """Test kernel vectors of (z I - M)."""

    def test_n1_root(self):
        """z=e gives sqrt(P - e)"""
        assert eigenfunction(1, root_type(1), "e") == [1]

    def test_n2_symmetric(self):
        """z^2 = 3 g2 gives (-g2/(2z), 1)"""
        z = sp.sqrt(3 * parse_expression("g2"))
        vector = eigenfunction(2, symmetric_type(2), z)
        assert vector[1] == 1
        assert sp.simplify(vector[0] + parse_expression("g2") / (2 * z)) == 0

    def test_n3_symmetric(self):
        """z=0 gives P'/2"""
        assert eigenfunction(3, symmetric_type(3), sp.Integer(0)) == [1]

    def test_not_a_root(self):
        """Non-roots raise"""
        with pytest.raises(SpectralError):
            eigenfunction(2, symmetric_type(2), sp.Integer(1))

    def test_numeric(self):
        """Floating mode at g2=4"""
        vector = eigenfunction(2, symmetric_type(2), float(np.sqrt(12.0)), params={"g2": 4.0, "g3": 1.0})
        assert vector[1] == pytest.approx(1.0)
        assert vector[0] == pytest.approx(-4.0 / (2 * np.sqrt(12.0)))

    def test_numeric_not_a_root(self):
        """Floating mode rejects a perturbed value"""
        with pytest.raises(SpectralError):
            eigenfunction(2, symmetric_type(2), float(np.sqrt(12.0)) + 1.0, params={"g2": 4.0, "g3": 1.0})


class TestSeriesResidual:
    """Test the Laurent-series oracle."""

    def test_weierstrass_coefficients(self):
        """c2 = g2/20, c3 = g3/28, c4 = g2^2/1200"""
        g2, g3 = parse_expression("g2"), parse_expression("g3")
        c = weierstrass_coefficients(g2, g3, 5)
        assert c[0] == g2 / 20
        assert c[1] == g3 / 28
        assert sp.expand(c[2] - g2 ** 2 / 1200) == 0
        assert sp.expand(c[3] - 3 * g2 * g3 / 6160) == 0

    def test_n1_exact(self):
        """z=e solves exactly"""
        report = series_residual_check(1, root_type(1), "e", order=10)
        assert report.exact
        assert report.nonzero == []
        assert report.max_residual == 0.0

    def test_n3_symmetric_zero(self):
        """z=0 with P'/2 solves exactly"""
        report = series_residual_check(3, symmetric_type(3), sp.Integer(0), order=12)
        assert report.passed

    def test_n2_root_sign(self):
        """z = -3e is the root-attached eigenvalue for n=2, z = +3e is not"""
        assert series_residual_check(2, root_type(2), parse_expression("-3*e")).passed
        assert not series_residual_check(2, root_type(2), parse_expression("3*e")).passed

    @pytest.mark.parametrize("n", range(1, 5))
    def test_generic_roots(self, n):
        """Every factor root solves through order 2n+6"""
        for ansatz in (symmetric_type(n), root_type(n)):
            if ansatz.is_empty:
                continue
            report = series_residual_check(n, ansatz, None, order=2 * n + 6)
            assert report.passed, report.nonzero

    @pytest.mark.slow
    def test_generic_roots_n5(self):
        """n=5 through order 16"""
        for ansatz in (symmetric_type(5), root_type(5)):
            assert series_residual_check(5, ansatz, None, order=16).passed

    def test_perturbed_numeric(self):
        """A non-eigenvalue leaves a residual"""
        z_star = float(np.sqrt(12.0)) + 1.0
        report = series_residual_check(2, symmetric_type(2), z_star, order=10,
                                       params={"g2": 4.0, "g3": 1.0, "e": 0.0})
        assert not report.exact
        assert report.max_residual > 1e-3

    def test_order_too_small(self):
        """order must be at least 2n+4"""
        with pytest.raises(SpectralError):
            series_residual_check(3, symmetric_type(3), sp.Integer(0), order=5)
