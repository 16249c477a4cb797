import itertools
import random

import pytest

from helpers import acyclic_by_removal_orders, e4plus_by_definition, random_linear
from linquad import constructions as cons
from linquad import search
from linquad.hypergraph import HypergraphError, LinearityError, hypergraph
from linquad.patterns import (
    Matching,
    TreePattern,
    contains_matching,
    contains_tree,
    is_acyclic,
    is_free,
    named_pattern,
    parse_pattern,
    validate_embedding,
)


@pytest.fixture(scope="module")
def s13():
    return cons.steiner_2_4_13().hypergraph


@pytest.fixture(scope="module")
def s16():
    return cons.steiner_2_4_16().hypergraph


class TestNamedPatterns:
    def test_path_shape(self):
        p2 = named_pattern("P", 2)
        assert p2.vertex_count == 7 and p2.k == 2
        assert len(set(p2.edges()[0]) & set(p2.edges()[1])) == 1

    def test_star_shape(self):
        for k in (2, 3, 5, 7):
            sk = named_pattern("S", k)
            assert sk.vertex_count == 3 * k + 1
            assert all(e[0] == 0 for e in sk.edges())

    def test_e4plus_shape(self):
        p = named_pattern("E4plus")
        assert p.k == 4 and p.vertex_count == 13
        center, *pendants = p.edges()
        for a, b in itertools.combinations(pendants, 2):
            assert not set(a) & set(b)
        assert len({tuple(set(center) & set(p))[0] for p in pendants}) == 3

    def test_s3plus_shape(self):
        p = named_pattern("S3plus")
        h = p.realize()
        degs = sorted(h.degrees)
        assert degs.count(3) == 1   # star center
        assert degs.count(2) == 1   # degree-one leaf vertex that got the pendant
        assert degs.count(1) == 11

    def test_errors(self):
        with pytest.raises(HypergraphError):
            named_pattern("Q")
        with pytest.raises(HypergraphError):
            named_pattern("P", 0)
        with pytest.raises(HypergraphError):
            named_pattern("S", 17)  # pattern cap

    def test_parse_tokens(self):
        assert parse_pattern("P4").name == "P4"
        assert parse_pattern("M3") == Matching(3)
        assert parse_pattern("S3plus").k == 4
        custom = parse_pattern("T:0.0,0.1,1.2")
        assert isinstance(custom, TreePattern) and custom.k == 4
        with pytest.raises(HypergraphError):
            parse_pattern("X9")

    def test_realizations_are_linear_trees(self):
        from linquad.hypergraph import is_linear

        for pat in (named_pattern("P", 5), named_pattern("S", 6),
                    named_pattern("S3plus"), named_pattern("E4plus")):
            h = pat.realize()
            assert is_linear(h) is not None
            assert is_acyclic(h)[0]


class TestContainsTree:
    def test_steiner13_path3_free(self, s13):
        assert contains_tree(s13, named_pattern("P", 3)) is None

    def test_steiner16_path4_free_path3_present(self, s16):
        assert contains_tree(s16, named_pattern("P", 4)) is None
        emb = contains_tree(s16, named_pattern("P", 3))
        assert emb is not None and validate_embedding(emb)

    def test_identity_embedding(self):
        p = named_pattern("E4plus")
        emb = contains_tree(p.realize(), p)
        assert emb is not None and validate_embedding(emb)

    def test_uniformity_mismatch(self, s13):
        with pytest.raises(HypergraphError):
            contains_tree(s13, TreePattern(3, ((0, 0),)))

    def test_nonlinear_host_rejected(self):
        h = hypergraph(4, 6, [(0, 1, 2, 3), (0, 1, 4, 5)])
        with pytest.raises(LinearityError):
            contains_tree(h, named_pattern("P", 2))


class TestContainsMatching:
    def test_steiner13_no_two_disjoint(self, s13):
        assert contains_matching(s13, 2) is None

    def test_steiner16_has_two_disjoint(self, s16):
        emb = contains_matching(s16, 2)
        assert emb is not None and validate_embedding(emb)

    def test_single_edge(self):
        h = hypergraph(4, 4, [(0, 1, 2, 3)])
        assert contains_matching(h, 2) is None
        assert contains_matching(h, 1) is not None

    def test_monotone(self):
        rng = random.Random(23)
        for _ in range(60):
            h = random_linear(rng.randint(8, 16), rng.randint(2, 10), rng)
            for k in (3, 2):
                if contains_matching(h, k) is not None:
                    assert contains_matching(h, k - 1) is not None


class TestIsFree:
    def test_empty_family_vacuous(self, s13):
        assert is_free(s13, [])

    def test_steiner16_family(self, s16):
        assert is_free(s16, ["S3plus", "P4"])
        assert not is_free(s16, ["S3plus", "P3"])

    def test_construction_freeness(self):
        built = cons.e4plus_free_construction(13)
        assert is_free(built.hypergraph, "E4plus")


class TestAcyclicity:
    def test_tree_realizations(self):
        for pat in (named_pattern("P", 4), named_pattern("S", 5),
                    named_pattern("E4plus")):
            ok, order = is_acyclic(pat.realize())
            assert ok and sorted(order) == list(range(pat.k))

    def test_steiner13_cyclic(self, s13):
        ok, order = is_acyclic(s13)
        assert not ok and order is None

    def test_two_disjoint_edges(self):
        ok, _ = is_acyclic(Matching(2).realize())
        assert ok

    def test_nonlinear_rejected(self):
        h = hypergraph(4, 6, [(0, 1, 2, 3), (0, 1, 4, 5)])
        with pytest.raises(LinearityError):
            is_acyclic(h)

    def test_certificate_is_valid_build_order(self):
        rng = random.Random(29)
        for _ in range(100):
            h = random_linear(rng.randint(6, 14), rng.randint(1, 7), rng)
            ok, order = is_acyclic(h)
            if not ok:
                continue
            seen = 0
            for i in order:
                assert bin(h.masks[i] & seen).count("1") <= 1
                seen |= h.masks[i]

    def test_matches_exhaustive_removal_orders(self):
        # reverse peeling agrees with trying all removal orders
        rng = random.Random(31)
        trials = 0
        while trials < 200:
            h = random_linear(rng.randint(6, 14), rng.randint(2, 8), rng)
            if len(h.edges) > 6:
                continue
            trials += 1
            assert is_acyclic(h)[0] == acyclic_by_removal_orders(h)


class TestOracleEquivalence:
    PATTERNS = [named_pattern("P", 2), named_pattern("P", 3),
                named_pattern("S", 2), named_pattern("S", 3)]

    def test_tree_tester_vs_tuple_enumeration(self):
        rng = random.Random(37)
        for _ in range(220):
            h = random_linear(rng.randint(7, 12), rng.randint(2, 10), rng)
            for pat in self.PATTERNS:
                emb = contains_tree(h, pat)
                naive = search.naive_contains_tree(list(h.edges), list(pat.edges()))
                assert (emb is not None) == naive
                if emb is not None:
                    assert validate_embedding(emb)

    def test_matching_tester_vs_enumeration(self):
        rng = random.Random(41)
        for _ in range(220):
            h = random_linear(rng.randint(7, 12), rng.randint(2, 10), rng)
            for k in (2, 3):
                emb = contains_matching(h, k)
                naive = search.naive_contains_matching(list(h.edges), k)
                assert (emb is not None) == naive
                if emb is not None:
                    assert validate_embedding(emb)

    def test_e4plus_tree_equals_disjoint_plus_transversal(self):
        # the tree-pattern reading and the direct definition agree on
        # linear hosts
        rng = random.Random(43)
        pat = named_pattern("E4plus")
        positives = 0
        for trial in range(200):
            n = rng.randint(13, 17)
            h = random_linear(n, rng.randint(6, 16), rng)
            got = contains_tree(h, pat) is not None
            want = e4plus_by_definition(h)
            assert got == want
            positives += got
        assert positives > 0  # the sample exercises both outcomes

    def test_e4plus_literal_and_steiner(self, s13):
        assert e4plus_by_definition(named_pattern("E4plus").realize())
        assert not e4plus_by_definition(s13)
