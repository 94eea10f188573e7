"""
Tests for cover verification, the shipped catalog and the bounded search.
"""

import json
import os
import sys

import pytest
import sympy as sp

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lamekit.algebra import MultiPoly, parse_expression
from lamekit.covers import (
    CoverMap,
    EllipticTarget,
    SearchBounds,
    Template,
    catalog,
    check_printed_table,
    load_catalog,
    search_cover,
    solve_triangular,
    verify_cover,
    verify_differential,
)
from lamekit.covers.catalog import build_cover
from lamekit.covers.models import CoverRecord
from lamekit.curves import PlaneCurve, differential, normal_form
from lamekit.exceptions import CatalogError, CurveError


def P(text):
    return MultiPoly.from_expr(parse_expression(text))


def make_cover(curve, p_map, pprime_map, G2, G3, constant="1", numerator="1", w_power=1, cover_id="test"):
    return CoverMap(
        id=cover_id,
        source=curve,
        target=EllipticTarget(P(G2), P(G3)),
        p_map=normal_form(p_map, curve),
        pprime_map=normal_form(pprime_map, curve),
        pullback_constant=P(constant),
        pullback=differential(curve, P(numerator), w_power),
    )


@pytest.fixture
def elliptic():
    return PlaneCurve(2, P("4*z**3 - g2*z - g3"), "weierstrass")


@pytest.fixture
def n2_curve():
    return PlaneCurve(2, P("(z**2 - 3*g2)*(27*g3 - 4*z**3 + 9*g2*z)"), "n2")


@pytest.fixture(scope="module")
def shipped():
    return catalog()


class TestEllipticTarget:
    """Test the target invariants."""

    def test_equianharmonic(self):
        """G2 = 0 is flagged"""
        assert EllipticTarget(P("0"), P("g3")).equianharmonic
        assert not EllipticTarget(P("g2"), P("g3")).equianharmonic

    def test_degenerate_rejected(self):
        """Vanishing discriminant needs the degenerate flag"""
        with pytest.raises(CurveError):
            EllipticTarget(P("972*g3**2"), P("-5832*g3**3"))
        assert EllipticTarget(P("972*g3**2"), P("-5832*g3**3"), degenerate=True).degenerate


class TestVerifyCover:
    """Test the exact target identity."""

    def test_identity_cover(self, elliptic):
        """z, w onto the curve itself"""
        cover = make_cover(elliptic, "z", "w", "g2", "g3")
        assert verify_cover(cover).passed
        assert verify_differential(cover).passed

    def test_n2_second(self, n2_curve):
        """The second n=2 cover with G2 = 27(g2^3 + 9 g3^2)/4"""
        cover = make_cover(n2_curve, "-(4*z**3 - 9*g2*z - 9*g3)/4", "w*(4*z**2 - 3*g2)/4",
                           "27*(g2**3 + 9*g3**2)/4", "243*g3*(g2**3 - 3*g3**2)/8", constant="-3")
        assert verify_cover(cover).passed
        assert verify_differential(cover).passed

    def test_printed_sign_fails_with_residual(self, n2_curve):
        """The opposite G3 sign leaves a nonzero residual instead of raising"""
        cover = make_cover(n2_curve, "-(4*z**3 - 9*g2*z - 9*g3)/4", "w*(4*z**2 - 3*g2)/4",
                           "27*(g2**3 + 9*g3**2)/4", "243*g3*(3*g3**2 - g2**3)/8", constant="-3")
        result = verify_cover(cover)
        assert not result.passed
        assert any(not r.is_zero() for r in result.residual)
        assert result.to_dict()["residual"]

    def test_wrong_differential_constant(self, elliptic):
        """d(p)/p' = 2 dz/w is false on the identity cover"""
        cover = make_cover(elliptic, "z", "w", "g2", "g3", constant="2")
        assert verify_cover(cover).passed
        assert not verify_differential(cover).passed

    def test_holomorphic_span(self, shipped):
        """n3-cover1 pulls back a basis differential of the genus-3 curve"""
        result = verify_differential(shipped.lookup("n3-cover1"))
        assert result.passed
        assert result.in_holomorphic_span is True


class TestCatalog:
    """Test the shipped cover catalog."""

    REQUIRED = [
        "n2-general", "n2-second", "n2-equianharmonic-birational",
        "n3-cover1", "n3-cover1-equianharmonic", "n3-cover2", "n3-cover3",
        "table-n2", "table-n3", "table-n4", "table-n5",
        "halphen-pi1", "halphen-pi2", "halphen-pi3", "genus3-general-pi",
    ]

    @pytest.mark.slow
    def test_all_entries_verified(self, shipped):
        """Every entry passes both checks with zero residual"""
        assert shipped.count() >= 13
        assert set(self.REQUIRED) <= set(shipped.ids())
        for cover_id in shipped.ids():
            assert all(r.passed for r in shipped.results[cover_id]), cover_id

    def test_lookup_halphen_pi1(self, shipped):
        """p = w^2 (16 z^2 + 8100 g3) / (25 (4 z^2 - 135 g3)^2)"""
        cover = shipped.lookup("halphen-pi1")
        expected = parse_expression("w**2*(16*z**2 + 8100*g3)/(25*(4*z**2 - 135*g3)**2)")
        assert sp.simplify(cover.p_map.as_expr() - expected) == 0
        assert cover.target.equianharmonic

    def test_lookup_genus3_general(self, shipped):
        """mu = w, nu = 2 z^2 + l2^2 - l1^2 onto nu^2 = 4 mu^3 + (l1^2 + l2^2)^2"""
        cover = shipped.lookup("genus3-general-pi")
        assert sp.simplify(cover.p_map.as_expr() - parse_expression("w")) == 0
        assert cover.target.G3 == P("-(l1**2 + l2**2)**2")

    def test_unknown_id(self, shipped):
        with pytest.raises(CatalogError):
            shipped.lookup("no-such-cover")

    def test_summary_pullback_pattern(self, shipped):
        """Summary rows pull back -3 z^(n-2) dz/w"""
        for n in range(2, 6):
            cover = shipped.lookup(f"table-n{n}")
            numerator, m = cover.pullback.power_form()
            assert cover.pullback_constant == -3
            assert m == 1
            assert numerator == P(f"z**{n - 2}")

    def test_table_n2_flagged_degenerate(self, shipped):
        """The verified n=2 row has a degenerate target; the printed pair is kept for reference"""
        cover = shipped.lookup("table-n2")
        assert cover.target.degenerate
        assert cover.printed["G2"] == "486*g3**2"

    def test_radical_entries(self, shipped):
        """halphen-pi3 adjoins u^3 = 5, v^2 = 15, i^2 = -1"""
        cover = shipped.lookup("halphen-pi3")
        assert {r.symbol for r in cover.radicals} == {"u", "v", "i"}


class TestCatalogLoading:
    """Test failure modes of catalog loading."""

    def _write(self, tmp_path, payload):
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps(payload))
        return path

    def test_corrupt_json(self, tmp_path):
        path = tmp_path / "catalog.json"
        path.write_text("{not json")
        with pytest.raises(CatalogError):
            load_catalog(path)

    def test_schema_violation(self, tmp_path):
        path = self._write(tmp_path, {"covers": [{"id": "x"}]})
        with pytest.raises(CatalogError):
            load_catalog(path)

    def test_failing_entry(self, tmp_path):
        """An entry with a wrong target aborts the load"""
        entry = {
            "id": "broken",
            "curve": {"k": 2, "p": "4*z**3 - g2*z - g3"},
            "target": {"G2": "g2", "G3": "2*g3"},
            "p_map": "z",
            "pprime_map": "w",
        }
        path = self._write(tmp_path, {"covers": [entry]})
        with pytest.raises(CatalogError):
            load_catalog(path)
        assert load_catalog(path, verify=False).count() == 1

    def test_substitution_and_radicals(self):
        """g3 -> -t^6 is applied to the curve before normal form"""
        record = CoverRecord.model_validate({
            "id": "pi2",
            "curve": {"k": 3, "p": "(z**2 + 25*g3/4)*(z**2 - 135*g3/4)"},
            "target": {"G2": "0", "G3": "g3"},
            "p_map": "u*w/(20*t**2)",
            "pprime_map": "(4*z**2 - 55*g3)/(80*t**3)",
            "pullback": {"constant": "4*u*t/3", "numerator": "z", "w_power": 2},
            "substitute": {"g3": "-t**6"},
            "radicals": [{"symbol": "u", "power": 3, "value": "5"}],
        })
        cover = build_cover(record)
        assert "g3" not in cover.source.p.free_variables()
        assert verify_cover(cover).passed
        assert verify_differential(cover).passed


class TestPrintedTable:
    """Test the printed summary rows against factorization and verification."""

    def test_factorizations(self, shipped):
        """Printed factorizations match except for the truncated n=3 G2"""
        checks = {c.n: c for c in check_printed_table(shipped)}
        assert set(checks) == {2, 3, 4, 5}
        for n in (2, 4, 5):
            assert all(checks[n].factorization_matches.values())
        assert not checks[3].factorization_matches["G2"]
        assert checks[3].factorization_matches["G3"]

    def test_verified_values(self, shipped):
        """n=4 agrees with print; n=3 G2 is 105948; n=5 differs by 4 and 16"""
        checks = {c.n: c for c in check_printed_table(shipped)}
        assert checks[4].printed_is_verified
        assert checks[3].verified["G2"] == 105948
        assert checks[5].verified["G2"] == 4 * checks[5].printed["G2"]
        assert checks[5].verified["G3"] == 16 * checks[5].printed["G3"]
        assert (checks[2].verified["G2"], checks[2].verified["G3"]) == (972, -5832)

    def test_p_constants(self, shipped):
        """9, 198, 1430, 6435"""
        checks = {c.n: c for c in check_printed_table(shipped)}
        assert [checks[n].verified["p"] for n in range(2, 6)] == [9, 198, 1430, 6435]


class TestSolveTriangular:
    """Test the triangular solver on small systems."""

    def test_linear_chain(self):
        x, y = sp.symbols("x y")
        g3 = parse_expression("g3")
        solutions = solve_triangular([x ** 2 - 16, 2 * y - x * g3], [x, y])
        assert {(s[x], sp.simplify(s[y])) for s in solutions} == {(4, 2 * g3), (-4, -2 * g3)}

    def test_inconsistent(self):
        x = sp.Symbol("x")
        assert solve_triangular([x - 1, x - 2], [x]) == []

    def test_irrational_root_dropped(self):
        x = sp.Symbol("x")
        assert solve_triangular([x ** 2 - 2], [x]) == []

    def test_resultant_elimination(self):
        """x + y = 3, x - y = 1 has no one-unknown equation"""
        x, y = sp.symbols("x y")
        solutions = solve_triangular([x + y - 3, x - y - 1], [x, y])
        assert solutions == [{x: 2, y: 1}]


class TestSearchCover:
    """Test recovery of covers by bounded search."""

    @pytest.fixture
    def n2_equianharmonic(self):
        return PlaneCurve(2, P("4*z**2*(27*g3 - 4*z**3)"), "n2-equianharmonic", singular=True)

    @pytest.fixture
    def n3_equianharmonic(self):
        return PlaneCurve(2, P("-16*z**7 + 2376*g3*z**4 - 91125*g3**2*z"), "n3-equianharmonic")

    def _targets(self, covers):
        return {(str(c.target.G2), str(c.target.G3)) for c in covers}

    def test_n2_cubic(self, n2_equianharmonic):
        """Recovers p = 9 g3 - 4 z^3 with the degenerate target (972, -5832)"""
        covers = search_cover(n2_equianharmonic, "cubic-in-z")
        assert covers
        assert self._targets(covers) == {(str(P("972*g3**2")), str(P("-5832*g3**3")))}
        assert all(c.target.degenerate for c in covers)
        p_maps = {sp.expand(c.p_map.as_expr()) for c in covers}
        assert p_maps == {sp.expand(parse_expression("9*g3 - 4*z**3"))}

    def test_n3_cubic(self, n3_equianharmonic):
        """Recovers p = 198 g3 - 4 z^3, G2 = 105948 g3^2, G3 = 10071864 g3^3"""
        covers = search_cover(n3_equianharmonic, Template.CUBIC_IN_Z)
        assert self._targets(covers) == {(str(P("105948*g3**2")), str(P("10071864*g3**3")))}
        positive = [c for c in covers if sp.expand(c.pprime_map.as_expr() - parse_expression("4*w*z")) == 0]
        assert len(positive) == 1
        cover = positive[0]
        assert cover.pullback_constant == -3
        assert cover.pullback.power_form() == (P("z"), 1)

    def test_elliptic_linear_in_w_empty(self, elliptic):
        """No p = w + beta cover of the elliptic curve"""
        assert search_cover(elliptic, "linear-in-w", SearchBounds(max_degree=2, max_exponent=1)) == []

    def test_elliptic_rational_z_identity(self, elliptic):
        """rational-z with deg P = 1 recovers the identity"""
        covers = search_cover(elliptic, "rational-z", SearchBounds(max_degree=1, max_exponent=1))
        targets = self._targets(covers)
        assert (str(P("g2")), str(P("g3"))) in targets
        assert any(sp.expand(c.p_map.as_expr()) == parse_expression("z") for c in covers)

    def test_rational_z_shifted_pole(self):
        """Translation by the half period over z = 1 on w^2 = 4 z^3 - 4 z"""
        curve = PlaneCurve(2, P("4*z**3 - 4*z"), "lemniscatic")
        covers = search_cover(curve, "rational-z", SearchBounds(max_degree=1, max_exponent=1))
        expected = parse_expression("(z + 1)/(z - 1)")
        shifted = [c for c in covers if sp.simplify(c.p_map.as_expr() - expected) == 0]
        assert shifted
        assert all(c.target.G2 == P("4") and c.target.G3.is_zero() for c in shifted)
        pprime = parse_expression("-2*w/(z - 1)**2")
        assert any(sp.simplify(c.pprime_map.as_expr() - pprime) == 0 for c in shifted)

    def test_rescaled_cover_verifies(self, n3_equianharmonic):
        """(p, p', G2, G3) -> (4 p, 8 p', 16 G2, 64 G3) is again a cover"""
        cover = make_cover(n3_equianharmonic, "792*g3 - 16*z**3", "32*w*z",
                           "1695168*g3**2", "644599296*g3**3", constant="-3/2", numerator="z")
        assert verify_cover(cover)
        assert verify_differential(cover)

    def test_halphen_linear_in_w(self):
        """p = w, p' = +-(2 z^2 - 55 g3/2) onto G3 = -1600 g3^2"""
        halphen = PlaneCurve(3, P("(z**2 + 25*g3/4)*(z**2 - 135*g3/4)"), "halphen")
        covers = search_cover(halphen, "linear-in-w", SearchBounds(max_degree=2, max_exponent=1))
        assert len(covers) == 2
        assert self._targets(covers) == {("0", str(P("-1600*g3**2")))}
        for cover in covers:
            assert cover.pullback.power_form() == (P("z"), 2)

    def test_unknown_template(self, elliptic):
        with pytest.raises(ValueError):
            search_cover(elliptic, "quartic-in-w")
