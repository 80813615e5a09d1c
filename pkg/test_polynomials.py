"""Tests for bit strings and exact polynomial arithmetic"""

from fractions import Fraction

import pytest
import sympy

from becorder.bitstrings import (
    display,
    dual_string,
    hex_label,
    parse_bitstring,
    thue_morse_prefix,
    universe,
    universe_up_to,
)
from becorder.errors import CapacityError, DomainError, EndpointRootError, ParseError
from becorder.polynomials import (
    ONE,
    ZERO,
    X,
    Poly,
    average,
    dual_poly,
    poly_eval,
    reliability_poly,
    sign_at,
    square_free_odd_part,
    strip_endpoint_roots,
    sturm_root_count,
    sturm_sequence,
)


class TestBitStrings:
    def test_parse_accepts_empty_tokens(self):
        assert parse_bitstring("-") == ""
        assert parse_bitstring(" eps ") == ""
        assert parse_bitstring("0110") == "0110"

    def test_parse_rejects_other_symbols(self):
        with pytest.raises(ParseError):
            parse_bitstring("0120")

    def test_dual_string(self):
        assert dual_string("1000") == "0111"
        assert dual_string("") == ""

    def test_thue_morse_prefix(self):
        assert thue_morse_prefix(2) == "01"
        assert thue_morse_prefix(4) == "0110"
        assert thue_morse_prefix(8) == "01101001"

    def test_universe_is_lexicographic(self):
        assert universe(2) == ["00", "01", "10", "11"]
        assert universe(0) == [""]
        assert len(list(universe_up_to(3))) == 15

    def test_labels(self):
        assert hex_label("11110000") == "f0"
        assert hex_label("101") == "101"
        assert display("") == "ε"


class TestReliabilityPoly:
    def test_base_cases(self):
        assert reliability_poly("") == X
        assert reliability_poly("0") == Poly([0, 0, 1])
        assert reliability_poly("1") == Poly([0, 2, -1])

    def test_first_bit_applied_first(self):
        assert reliability_poly("10") == Poly([0, 0, 4, -4, 1])
        assert reliability_poly("01") == Poly([0, 0, 2, 0, -1])

    @pytest.mark.parametrize("length", range(0, 7))
    def test_shape(self, length):
        for alpha in universe(length):
            p = reliability_poly(alpha)
            assert p.degree == 1 << length
            assert p.coeffs[0] == 0
            assert sum(p.coeffs) == 1

    def test_composition(self):
        for s in universe_up_to(5):
            for cut in range(1, len(s)):
                alpha, kappa = s[:cut], s[cut:]
                assert reliability_poly(s) == reliability_poly(kappa).compose(reliability_poly(alpha))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            reliability_poly("0000", l_max=3)

    def test_canonical_form(self):
        assert Poly([1, 2, 0, 0]) == Poly([1, 2])
        assert Poly([0, 0]).is_zero
        assert ZERO.degree == -1


class TestEvaluation:
    def test_poly_eval(self, rs_b_diff):
        assert poly_eval(Poly([0, 0, 1]), Fraction(1, 2)) == Fraction(1, 4)
        assert poly_eval(reliability_poly("10"), 1) == 1
        assert poly_eval(rs_b_diff, Fraction(1, 2)) == Fraction(1, 8)

    def test_sign_at(self, rs_b_diff):
        assert sign_at(rs_b_diff, Fraction(1, 3)) == 1
        assert sign_at(rs_b_diff, 0) == 0
        assert sign_at(Poly([1, -2]), Fraction(3, 4)) == -1

    def test_average(self):
        assert average("") == Fraction(1, 2)
        assert average("0") == Fraction(1, 3)
        assert average("1") == Fraction(2, 3)
        assert average("01") == Fraction(7, 15)
        assert average("10") == Fraction(8, 15)


class TestDuality:
    def test_dual_poly(self):
        assert dual_poly(X) == X
        assert dual_poly(Poly([0, 0, 1])) == Poly([0, 2, -1])

    def test_dual_string_matches_dual_poly(self):
        for alpha in universe_up_to(5):
            assert reliability_poly(dual_string(alpha)) == dual_poly(reliability_poly(alpha))

    def test_injective(self):
        polys = {reliability_poly(alpha) for alpha in universe_up_to(5)}
        assert len(polys) == 63


class TestRootTools:
    def test_strip_endpoint_roots(self, rs_b_diff):
        assert strip_endpoint_roots(rs_b_diff) == (2, 2, Poly([2]))

    def test_strip_zero_raises(self):
        with pytest.raises(DomainError):
            strip_endpoint_roots(ZERO)

    def test_odd_part_of_a_square(self):
        square = Poly([-1, 0, 2]) * Poly([-1, 0, 2])
        assert square_free_odd_part(square).degree == 0

    def test_odd_part_without_odd_factors(self, rs_b_diff):
        assert square_free_odd_part(rs_b_diff) == Poly([2])

    def test_odd_part_keeps_odd_multiplicities(self):
        g = Poly([4, 1, -2, -1])
        p = Poly([0, 0, 0, 1]) * Poly([1, -2, 1]) * g
        odd = square_free_odd_part(p)
        assert odd.degree == 4
        for t in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
            assert sign_at(odd, t) == sign_at(p, t)

    def test_odd_part_of_zero(self):
        with pytest.raises(DomainError):
            square_free_odd_part(ZERO)

    def test_sturm_counts(self, rs_b_diff, incomparable_pair):
        assert sturm_root_count(Poly([-1, 0, 4]), 0, 1) == 1
        assert sturm_root_count(square_free_odd_part(rs_b_diff), 0, 1) == 0

        alpha, gamma = incomparable_pair
        _, _, g = strip_endpoint_roots(reliability_poly(alpha) - reliability_poly(gamma))
        assert sturm_root_count(square_free_odd_part(g), 0, 1) >= 1

    def test_sturm_matches_sympy(self):
        x = sympy.symbols("x")
        for alpha, gamma in (("0110", "1001"), ("011", "10"), ("1100", "0011")):
            _, _, g = strip_endpoint_roots(reliability_poly(alpha) - reliability_poly(gamma))
            expected = sympy.Poly(list(reversed(g.coeffs)), x).count_roots(0, 1)
            h = square_free_odd_part(g)
            if h.degree >= 1:
                assert sturm_root_count(h, 0, 1) <= expected

    def test_sturm_chain_small(self):
        chain = sturm_sequence(Poly([-1, 0, 4]))
        assert [q.coeffs for q in chain] == [(-1, 0, 4), (0, 1), (1,)]

    def test_sturm_chain_members_are_primitive(self):
        _, _, g = strip_endpoint_roots(reliability_poly("0110") - reliability_poly("1001"))
        h = square_free_odd_part(g)
        chain = sturm_sequence(h)
        assert chain[0] == h.primitive()
        assert all(q.content() == 1 for q in chain)
        degrees = [q.degree for q in chain]
        assert degrees == sorted(degrees, reverse=True)
        assert len(set(degrees)) == len(degrees)

    def test_sturm_rejects_endpoint_roots(self):
        with pytest.raises(EndpointRootError):
            sturm_root_count(X, 0, 1)

    def test_sturm_rejects_empty_interval(self):
        with pytest.raises(DomainError):
            sturm_root_count(ONE + X, 1, 0)
