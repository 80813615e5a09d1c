"""Tests for rule-set seeds and the closure engine"""

import pytest

from becorder.bitstrings import dual_string, universe_up_to
from becorder.certify import std_compare
from becorder.closure import close, node_count, node_index, node_string, seed_rules
from becorder.errors import CapacityError, DomainError, ParseError
from becorder.models import OrderOutcome

CLOSURE_TAGS = {"rsA", "rsB", "rsC", "rsD", "rsE", "rsF", "prefix", "suffix", "dual", "trans"}


class TestNodes:
    def test_index_order(self):
        assert [node_index(s) for s in ("", "0", "1", "00", "11")] == [0, 1, 2, 3, 6]
        assert node_count(3) == 15

    def test_round_trip(self):
        for index, alpha in enumerate(universe_up_to(4)):
            assert node_index(alpha) == index
            assert node_string(index) == alpha


class TestSeeds:
    def test_rs_a(self):
        relation = seed_rules("A", 1)
        assert relation.edge_set() == {("1", "0")}
        assert relation.contains("0", "0")
        assert relation.tag("1", "0") == "rsA"

    def test_rs_c(self):
        relation = seed_rules("C", 6)
        assert ("1001", "0110") in relation
        assert ("100001", "010010") in relation
        assert relation.edge_count == 3

    def test_rs_e_lengths(self):
        assert ("1001", "0110") in seed_rules("E", 4)
        assert ("10010110", "01101001") in seed_rules("E", 8)
        assert ("100101100110", "011010011001") in seed_rules("E", 12)

    def test_rs_f(self):
        assert seed_rules("F", 3).edge_set() == {("011", "10")}
        assert seed_rules("F", 2).edge_count == 0

    def test_rs_d_needs_opt_in(self):
        assert seed_rules("D", 6).edge_count == 0
        relation = seed_rules("D", 6, enable_rsd=True)
        assert relation.edge_set() == {("011", "100"), ("001111", "110000")}

    def test_letters_are_normalised(self):
        assert seed_rules("fa,b", 3).rules == "ABF"

    def test_unknown_letter(self):
        with pytest.raises(ParseError):
            seed_rules("AZ", 3)

    def test_cap(self):
        with pytest.raises(CapacityError):
            seed_rules("A", 17)


class TestClose:
    def test_empty_seed(self):
        assert close(seed_rules("", 3)).edge_count == 0

    def test_rs_a_generates_the_chain(self):
        relation = close(seed_rules("A", 2))
        for pair in (("1", "0"), ("11", "10"), ("10", "00"), ("11", "01"), ("11", "00"), ("01", "00")):
            assert pair in relation
        assert ("10", "01") not in relation
        assert ("01", "10") not in relation

    def test_rs_f_chain(self):
        relation = close(seed_rules("F", 4))
        assert ("0011", "010") in relation
        assert ("010", "1000") in relation
        assert ("0011", "1000") in relation

    def test_closed_under_duality(self):
        relation = close(seed_rules("BCF", 5))
        for lhs, rhs in relation.edge_set():
            assert relation.contains(dual_string(rhs), dual_string(lhs))

    def test_transitive(self):
        relation = close(seed_rules("ABF", 4))
        edges = relation.edge_set()
        for a, b in edges:
            for c, d in edges:
                if b == c and a != d:
                    assert (a, d) in relation

    def test_idempotent(self):
        once = close(seed_rules("ABEF", 4))
        assert close(once).edge_set() == once.edge_set()

    def test_monotone_in_rules(self):
        smaller = close(seed_rules("AB", 5)).edge_set()
        larger = close(seed_rules("ABC", 5)).edge_set()
        assert smaller <= larger

    def test_provenance(self):
        relation = close(seed_rules("ABCEF", 4))
        assert set(relation.provenance_counts()) <= CLOSURE_TAGS
        assert sum(relation.provenance_counts().values()) == relation.edge_count
        assert relation.tag("1", "0") == "rsA"
        assert relation.closed

    def test_chain_expands_transitive_edges(self):
        relation = close(seed_rules("ABF", 4))
        expanded = 0
        for lhs, rhs, tag in relation.edges():
            steps = relation.chain(lhs, rhs)
            assert steps[0][0] == lhs
            assert steps[-1][1] == rhs
            for (_, middle, _), (start, _, _) in zip(steps, steps[1:]):
                assert middle == start
            for a, b, step_tag in steps:
                assert (a, b) in relation
                assert step_tag != "trans"
            if tag == "trans":
                assert len(steps) >= 2
                expanded += 1
            else:
                assert steps == [(lhs, rhs, tag)]
        assert expanded > 0

    def test_chain_edge_cases(self):
        relation = close(seed_rules("A", 2))
        assert relation.chain("10", "10") == []
        with pytest.raises(DomainError):
            relation.chain("10", "01")

    def test_sound_against_the_exact_oracle(self):
        relation = close(seed_rules("ABCEF", 4))
        for lhs, rhs in relation.edge_set():
            assert std_compare(lhs, rhs) is OrderOutcome.GREATER, (lhs, rhs)
