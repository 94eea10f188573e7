"""
Tests for the exact algebra kernel.
"""

import os
import sys
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.algebra import (
    MultiPoly,
    PolyMatrix,
    Radical,
    charpoly_exact,
    parse_expression,
    poly_arith,
    poly_from_json,
    poly_to_json,
    product_over_roots,
    reduce_e,
    reduce_radicals,
    resultant,
    sylvester_matrix,
)
from lamekit.exceptions import AlgebraError


def P(text):
    return MultiPoly.from_expr(parse_expression(text))


def random_poly(rng, names=("z", "g2", "e"), terms=4, degree=3):
    data = {}
    for _ in range(terms):
        exp = tuple(int(k) for k in rng.integers(0, degree + 1, size=len(names)))
        data[exp] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return MultiPoly.from_terms(names, data)


class TestMultiPoly:
    """Test polynomial construction and arithmetic."""

    def test_difference_of_squares(self):
        """(z+1)(z-1) = z^2 - 1"""
        product = poly_arith(P("z + 1"), P("z - 1"), "mul")
        assert product == P("z**2 - 1")
        assert product.degree("z") == 2

    def test_context_merge(self):
        """Polynomials in different variables combine"""
        total = P("z**2") + P("g2")
        assert total.variables == ("z", "g2")
        assert total.terms == {(2, 0): Fraction(1), (0, 1): Fraction(1)}

    def test_zero_polynomial(self):
        """Zero is recognized and has degree -1"""
        zero = P("z") - P("z")
        assert zero.is_zero()
        assert zero.degree("z") == -1

    def test_unknown_operation(self):
        """Unsupported operations raise"""
        with pytest.raises(AlgebraError):
            poly_arith(P("z"), P("z"), "div")

    def test_coefficients_split(self):
        """Coefficient extraction by variable"""
        p = P("4*z**3 - g2*z - g3")
        coefficients = p.coefficients("z")
        assert coefficients[3] == 4
        assert coefficients[1] == P("-g2")
        assert coefficients[0] == P("-g3")

    def test_evaluate(self):
        """Numeric evaluation"""
        p = P("4*z**3 - g2*z - g3")
        assert p.evaluate({"z": 1.0, "g2": 4.0, "g3": 1.0}) == pytest.approx(-1.0)

    def test_hash_ignores_variable_context(self):
        """Equal polynomials over different variable tuples hash alike"""
        narrow = MultiPoly.from_terms(("z",), {(2,): 1, (0,): Fraction(1, 2)})
        wide = MultiPoly.from_terms(("z", "g2", "e"), {(2, 0, 0): 1, (0, 0, 0): Fraction(1, 2)})
        assert narrow == wide
        assert hash(narrow) == hash(wide)
        assert len({narrow, wide, P("z**2 + 1/2")}) == 1
        assert hash(MultiPoly.from_terms(("g2", "e"), {(0, 0): 4})) == hash(4)

    def test_ring_axioms(self):
        """Associativity, commutativity and distributivity on random inputs"""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a, b, c = (random_poly(rng) for _ in range(3))
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a - a == 0


class TestResultant:
    """Test resultants and Sylvester matrices."""

    def test_linear_factor(self):
        """Res(z^2 + g2, z - g3) = g3^2 + g2"""
        assert resultant(P("z**2 + g2"), P("z - g3"), "z") == P("g3**2 + g2")

    def test_matches_sylvester_determinant(self):
        """Resultant equals the Sylvester determinant"""
        p = P("z**2 + g2*z + 1")
        q = P("z**3 - g3*z + g2")
        matrix = sylvester_matrix(p, q, "z")
        assert matrix.shape == (5, 5)
        assert resultant(p, q, "z") == MultiPoly.from_expr(sp.expand(matrix.det()))

    def test_common_root_gives_zero(self):
        """A shared factor makes the resultant vanish"""
        p = P("(z - g2)*(z + 1)")
        q = P("(z - g2)*(z**2 + 3)")
        assert resultant(p, q, "z").is_zero()

    def test_not_bivariate(self):
        """Constant in the elimination variable is rejected"""
        with pytest.raises(AlgebraError, match="not bivariate in z"):
            resultant(P("g2 + 1"), P("z - 1"), "z")


class TestCharpoly:
    """Test exact characteristic polynomials."""

    def test_lame_n2_symmetric(self):
        """det(zI - M) for the n=2 symmetric operator"""
        matrix = PolyMatrix.from_exprs([[0, -symbol_expr("g2") / 2], [-6, 0]])
        assert charpoly_exact(matrix) == P("z**2 - 3*g2")

    def test_cofactor_oracle(self):
        """3x3 charpoly against the cofactor expansion"""
        rows = [["e", "g2", "1"], ["2", "e", "g3"], ["0", "1", "-e"]]
        matrix = PolyMatrix.from_exprs([[parse_expression(x) for x in r] for r in rows])
        z = sp.Symbol("z")
        expected = (z * sp.eye(3) - matrix.to_sympy()).det(method="bareiss")
        assert charpoly_exact(matrix) == MultiPoly.from_expr(sp.expand(expected))

    def test_non_square(self):
        """Non-square matrices are rejected"""
        matrix = PolyMatrix.from_exprs([[1, 2, 3], [4, 5, 6]])
        with pytest.raises(AlgebraError):
            charpoly_exact(matrix)

    def test_variable_clash(self):
        """Charpoly variable must not occur in the entries"""
        matrix = PolyMatrix.from_exprs([[parse_expression("z")]])
        with pytest.raises(AlgebraError):
            charpoly_exact(matrix, "z")


def symbol_expr(name):
    return parse_expression(name)


class TestRelations:
    """Test reduction modulo e and radicals."""

    def test_reduce_cube(self):
        """4e^3 = g2 e + g3"""
        assert reduce_e(P("e**3")) == P("(g2*e + g3)/4")

    def test_reduce_fourth_power(self):
        """e^4 = (g2 e^2 + g3 e)/4"""
        assert reduce_e(P("e**4")) == P("(g2*e**2 + g3*e)/4")

    def test_idempotent(self):
        """Reducing twice changes nothing"""
        p = P("e**5 + z*e**3 - g2")
        assert reduce_e(reduce_e(p)) == reduce_e(p)
        assert reduce_e(p).degree("e") <= 2

    def test_homomorphism(self):
        """reduce(a*b) = reduce(reduce(a)*reduce(b))"""
        rng = np.random.default_rng(11)
        for _ in range(10):
            a, b = random_poly(rng, degree=4), random_poly(rng, degree=4)
            assert reduce_e(a * b) == reduce_e(reduce_e(a) * reduce_e(b))

    def test_radicals(self):
        """u^3 = 5 and i^2 = -1"""
        radicals = [Radical("u", 3, sp.Integer(5)), Radical("i", 2, sp.Integer(-1))]
        assert reduce_radicals(P("u**4 + i**3"), radicals) == P("5*u - i")

    def test_product_over_roots(self):
        """(z+3e1)(z+3e2)(z+3e3) in g2, g3"""
        assert product_over_roots(P("z + 3*e")) == P("z**3 - 9*g2*z/4 + 27*g3/4")

    def test_product_over_roots_constant(self):
        """e-free input is cubed"""
        assert product_over_roots(P("z - 1")) == P("(z - 1)**3")


class TestCodec:
    """Test the polynomial JSON codec."""

    def test_expr_form(self):
        """Expression strings parse to the same polynomial as the terms form"""
        from_expr = poly_from_json({"expr": "4*z**3 - g2*z - g3"})
        payload = poly_to_json(from_expr)
        assert payload["vars"] == ["z", "g2", "g3"]
        assert {"exp": [3, 0, 0], "coef": "4/1"} in payload["terms"]
        assert poly_from_json(payload) == from_expr

    def test_rational_coefficients(self):
        """Coefficients keep their exact value"""
        payload = poly_to_json(P("z/3 - 5/7"))
        assert {"exp": [0], "coef": "-5/7"} in payload["terms"]

    def test_i_is_a_plain_symbol(self):
        """i parses as an adjoined symbol, not the imaginary unit"""
        expr = parse_expression("i**2")
        assert expr != -1
        assert {str(s) for s in expr.free_symbols} == {"i"}

    def test_malformed(self):
        """Missing keys raise AlgebraError"""
        with pytest.raises(AlgebraError):
            poly_from_json({"vars": ["z"]})

    def test_unparsable(self):
        """Garbage expressions raise AlgebraError"""
        with pytest.raises(AlgebraError):
            parse_expression("z +* 3")
