"""Tests for the total preorders, fst, influence and rankings"""

import math
from fractions import Fraction
from itertools import combinations

import pytest
from scipy.stats import kendalltau

from becorder.bitstrings import dual_string, universe
from becorder.certify import std_compare
from becorder.errors import CapacityError, DomainError, UniverseMismatchError
from becorder.models import BetaSpec, MethodSpec, OrderOutcome, TotalOutcome
from becorder.orders import (
    Ranking,
    at0_compare,
    at0_geq_diff,
    at1_compare,
    at1_geq_diff,
    at_incomparable,
    at_witness_family,
    avg_compare,
    beta_compare,
    beta_compare_detailed,
    beta_exact,
    beta_value,
    fst_compare,
    hlf,
    hlf_compare,
    hlf_compare_detailed,
    influence,
    kendall_tau,
    more01_incomparable,
    rank_universe,
    rsd_beta_report,
    total_compare,
)

ROOT_HALF = math.sqrt(0.5)


class TestAtZeroAndOne:
    def test_at0(self, incomparable_pair):
        assert at0_compare("10", "01") is TotalOutcome.GREATER
        assert at0_compare(*incomparable_pair) is TotalOutcome.GREATER
        assert at0_compare("0110", "0110") is TotalOutcome.EQUIVALENT

    def test_at0_geq_diff(self):
        assert at0_geq_diff("1", "0")
        assert at0_geq_diff("101", "101")
        assert not at0_geq_diff("0", "1")

    def test_at1(self, incomparable_pair):
        assert at1_compare(*incomparable_pair) is TotalOutcome.LESS
        assert at1_compare("1", "0") is TotalOutcome.GREATER
        assert at1_compare("11", "11") is TotalOutcome.EQUIVALENT

    def test_at1_geq_diff(self):
        assert at1_geq_diff("1", "0")
        assert not at1_geq_diff("0", "1")

    def test_disagreement_certifies_incomparability(self, incomparable_pair):
        assert at_incomparable(*incomparable_pair)
        assert not at_incomparable("10", "01")
        assert at_witness_family("", "") == incomparable_pair
        alpha, gamma = at_witness_family("1", "0")
        assert at_incomparable(alpha, gamma)


class TestHalfway:
    def test_empty_string(self):
        assert hlf("").contains(Fraction(1, 2))

    def test_values(self):
        assert math.isclose(float(hlf("0").midpoint), ROOT_HALF, rel_tol=1e-14)
        assert math.isclose(float(hlf("01").midpoint), math.sqrt(1 - ROOT_HALF), rel_tol=1e-14)
        assert math.isclose(float(hlf("1").midpoint), 1 - ROOT_HALF, rel_tol=1e-14)

    def test_width(self):
        for precision in (8, 64, 200):
            assert hlf("0110", precision).width <= Fraction(1, 1 << precision)

    def test_bad_precision(self):
        with pytest.raises(DomainError):
            hlf("0", 0)
        with pytest.raises(DomainError):
            hlf_compare_detailed("1", "0", start=64, cap=32)

    def test_compare(self):
        assert hlf_compare("1", "0") is TotalOutcome.GREATER
        assert hlf_compare("10", "01") is TotalOutcome.GREATER
        assert hlf_compare_detailed("0101", "0101") == (TotalOutcome.EQUIVALENT, False)

    def test_deterministic(self):
        first = [hlf_compare(a, b) for a, b in combinations(universe(3), 2)]
        second = [hlf_compare(a, b) for a, b in combinations(universe(3), 2)]
        assert first == second


class TestFst:
    def test_examples(self, incomparable_pair):
        assert fst_compare("1", "0") is OrderOutcome.GREATER
        assert fst_compare(*incomparable_pair) is OrderOutcome.INCOMPARABLE
        assert fst_compare("011", "011") is OrderOutcome.EQUAL

    def test_std_implies_fst(self):
        for alpha, gamma in combinations(universe(4), 2):
            outcome = std_compare(alpha, gamma)
            if outcome is OrderOutcome.GREATER:
                assert fst_compare(alpha, gamma) in (OrderOutcome.GREATER, OrderOutcome.EQUIVALENT)
                assert avg_compare(alpha, gamma).at_least
                assert hlf_compare(alpha, gamma).at_least


class TestBeta:
    def test_exact(self):
        assert beta_exact("1001", Fraction(2)) == 9
        assert beta_exact("000", Fraction(3, 2)) == 0

    def test_interval(self):
        value = beta_value("011", BetaSpec.parse("2^(1/4)"))
        assert math.isclose(float(value.midpoint), 2 ** 0.25 + 1, rel_tol=1e-14)

    def test_literal_is_enclosed(self):
        value = beta_value("1001", BetaSpec.parse("1.5"))
        assert value.contains(Fraction(3, 2) ** 3 + 1)

    def test_compare(self):
        assert beta_compare("10", "01", BetaSpec.parse("1.5")) is TotalOutcome.GREATER
        assert beta_compare("01101001", "10010110", BetaSpec.parse("1.2")) is TotalOutcome.LESS
        assert beta_compare("101", "0101", BetaSpec.parse("bec")) is TotalOutcome.EQUIVALENT

    def test_root_compare_is_not_capped(self):
        outcome, capped = beta_compare_detailed("1000", "0111", BetaSpec.parse("awgn"))
        assert outcome is TotalOutcome.LESS
        assert not capped

    def test_parse(self):
        assert BetaSpec.parse("2^1/4") == BetaSpec.parse("2**(1/4)")
        assert BetaSpec.parse("awgn").label == "2^(1/4)"
        assert BetaSpec.parse("bec").root_q == "3.627"

    def test_dual_flip(self):
        beta = BetaSpec.parse("1.5")
        for alpha, gamma in combinations(universe(4), 2):
            left = beta_compare(alpha, gamma, beta)
            right = beta_compare(dual_string(alpha), dual_string(gamma), beta)
            assert left is right.reversed()


class TestInfluence:
    def test_values(self):
        assert math.isclose(float(influence("").midpoint), 2 * ROOT_HALF - 1, rel_tol=1e-14)
        expected = math.sqrt(ROOT_HALF) - math.sqrt(1 - ROOT_HALF)
        assert math.isclose(float(influence("0").midpoint), expected, rel_tol=1e-13)

    def test_nonnegative(self):
        for length in range(5):
            for alpha in universe(length):
                assert influence(alpha).lower >= 0

    def test_cap(self):
        with pytest.raises(CapacityError):
            influence("0101", max_level=3)


class TestMore01:
    def test_examples(self):
        assert more01_incomparable("1100", "10")
        assert not more01_incomparable("10", "01")
        assert not more01_incomparable("11", "0")

    def test_implies_incomparable(self):
        strings = [s for length in range(1, 5) for s in universe(length)]
        for alpha in strings:
            for gamma in strings:
                if more01_incomparable(alpha, gamma):
                    assert std_compare(alpha, gamma) is OrderOutcome.INCOMPARABLE


class TestRankings:
    @pytest.mark.parametrize("method", ["avg", "hlf", "at0", "at1", "beta:1.5", "beta:2^(1/4)", "beta:bec"])
    def test_one_bit(self, method):
        assert rank_universe(1, method).order == ("1", "0")

    def test_avg(self):
        ranking = rank_universe(2, "avg")
        assert ranking.order == ("11", "10", "01", "00")
        assert ranking.values == ("4/5", "8/15", "7/15", "1/5")

    def test_empty_universe(self):
        assert rank_universe(0, "hlf").order == ("",)

    def test_rows_use_hex_labels(self):
        rows = rank_universe(4, "avg").rows()
        assert rows[0][:3] == (1, "1111", "f")

    def test_ties_break_lexicographically(self):
        # at beta = 1 the value is the number of ones
        ranking = rank_universe(2, "beta:1")
        assert ranking.order == ("11", "01", "10", "00")
        assert ranking.values == ("2", "1", "1", "0")

    def test_partial_orders_cannot_rank(self):
        with pytest.raises(DomainError):
            rank_universe(2, "std")

    def test_cap(self):
        with pytest.raises(CapacityError):
            rank_universe(9, "avg")

    def test_total_compare_rejects_partial_orders(self):
        with pytest.raises(DomainError):
            total_compare("1", "0", MethodSpec.parse("fst"))


class TestKendall:
    def test_identity_and_reverse(self):
        ranking = rank_universe(3, "avg")
        backwards = Ranking("reversed", tuple(reversed(ranking.order)), tuple(reversed(ranking.values)))
        assert kendall_tau(ranking, ranking) == 0
        assert kendall_tau(ranking, backwards) == 8 * 7 // 2

    def test_matches_scipy(self):
        first, second = rank_universe(4, "avg"), rank_universe(4, "hlf")
        where = second.positions()
        tau, _ = kendalltau(range(16), [where[a] for a in first.order])
        assert kendall_tau(first, second) == round((1 - tau) * 16 * 15 / 4)

    def test_one_bit_rankings_agree(self):
        rankings = [rank_universe(1, m) for m in ("avg", "hlf", "beta:bec", "beta:awgn")]
        assert all(kendall_tau(rankings[0], r) == 0 for r in rankings)

    def test_mismatch(self):
        with pytest.raises(UniverseMismatchError):
            kendall_tau(rank_universe(2, "avg"), rank_universe(3, "avg"))


class TestRsdBeta:
    def test_root_bound_survives(self):
        report = rsd_beta_report(k_max=4)
        assert report.root_bound_holds
        assert not report.inverse_root_bound_holds
        assert [row.k for row in report.rows] == [1, 2, 3, 4]
