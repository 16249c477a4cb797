import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_linear
from linquad import constructions as cons
from linquad.hypergraph import (
    CapacityError,
    FormatError,
    HypergraphError,
    LinearityError,
    add_edge_linear,
    components,
    degree,
    degree_sequence,
    degree_vector,
    empty,
    hypergraph,
    is_linear,
    leave_graph,
    parse,
    serialize,
)


@pytest.fixture(scope="module")
def s13():
    return cons.steiner_2_4_13().hypergraph


@pytest.fixture(scope="module")
def s16():
    return cons.steiner_2_4_16().hypergraph


class TestConstruction:
    def test_rejects_duplicate_edges(self):
        with pytest.raises(HypergraphError, match="duplicate"):
            hypergraph(4, 8, [(0, 1, 2, 3), (3, 2, 1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(HypergraphError):
            hypergraph(4, 4, [(0, 1, 2, 4)])

    def test_rejects_repeated_vertex(self):
        with pytest.raises(HypergraphError):
            hypergraph(4, 8, [(0, 1, 2, 2)])

    def test_rejects_bad_uniformity(self):
        with pytest.raises(HypergraphError):
            hypergraph(5, 8, [])

    def test_capacity(self):
        with pytest.raises(CapacityError):
            hypergraph(4, 257, [])
        assert empty(4, 256).n == 256

    def test_canonical_order(self):
        a = hypergraph(4, 8, [(4, 5, 6, 7), (0, 1, 2, 3)])
        b = hypergraph(4, 8, [(0, 1, 2, 3), (7, 6, 5, 4)])
        assert a == b


class TestLinearity:
    def test_steiner_is_linear(self, s13):
        cov = is_linear(s13)
        assert cov is not None
        assert len(cov.cover) == 78

    def test_shared_pair_not_linear(self):
        h = hypergraph(4, 6, [(0, 1, 2, 3), (0, 1, 4, 5)])
        assert is_linear(h) is None

    def test_empty_is_linear(self):
        assert is_linear(empty(4, 5)) is not None

    def test_covering_edge_lookup(self, s13):
        cov = is_linear(s13)
        idx = cov.covering_edge(0, 1)
        assert set((0, 1)) <= set(s13.edges[idx])


class TestDegrees:
    def test_steiner13_regular(self, s13):
        assert all(degree(s13, v) == 4 for v in range(13))

    def test_steiner16_regular(self, s16):
        assert degree_sequence(s16) == [5] * 16

    def test_isolated_vertex(self):
        assert degree(hypergraph(4, 6, [(0, 1, 2, 3)]), 5) == 0

    def test_out_of_range(self, s13):
        with pytest.raises(HypergraphError):
            degree(s13, 13)

    def test_degree_vector_steiner(self, s13):
        for e in s13.edges:
            assert degree_vector(s13, e) == (4, 4, 4, 4)

    def test_degree_vector_single_edge(self):
        h = hypergraph(4, 4, [(0, 1, 2, 3)])
        assert degree_vector(h, (0, 1, 2, 3)) == (1, 1, 1, 1)

    def test_degree_vector_mixed(self):
        h = hypergraph(4, 7, [(0, 1, 2, 3), (0, 4, 5, 6)])
        assert degree_vector(h, (0, 1, 2, 3)) == (2, 1, 1, 1)

    def test_degree_vector_missing_edge(self, s13):
        with pytest.raises(HypergraphError):
            degree_vector(s13, (0, 1, 2, 5))


class TestComponents:
    def test_disjoint_union_splits(self, s13):
        h = cons.disjoint_union(s13, s13)
        comps, isolated = components(h)
        assert len(comps) == 2 and not isolated
        assert all(len(c.vertices) == 13 for c in comps)
        assert all(len(c.subhypergraph.edges) == 13 for c in comps)

    def test_empty(self):
        comps, isolated = components(empty(4, 4))
        assert comps == [] and isolated == [0, 1, 2, 3]

    def test_path_is_connected(self):
        from linquad.patterns import named_pattern

        h = named_pattern("P", 3).realize()
        comps, isolated = components(h)
        assert len(comps) == 1 and len(comps[0].vertices) == 10 and not isolated


class TestAddEdge:
    def test_accepts_disjoint(self):
        h = hypergraph(4, 8, [(0, 1, 2, 3)])
        h2 = add_edge_linear(h, (0, 4, 5, 6))
        assert len(h2.edges) == 2 and len(h.edges) == 1

    def test_rejects_shared_pair(self):
        h = hypergraph(4, 8, [(0, 1, 2, 3)])
        with pytest.raises(LinearityError) as exc:
            add_edge_linear(h, (0, 1, 4, 5))
        assert exc.value.pair == (0, 1)

    def test_rejects_duplicate(self):
        h = hypergraph(4, 8, [(0, 1, 2, 3)])
        with pytest.raises(LinearityError):
            add_edge_linear(h, (3, 2, 1, 0))

    def test_readd_steiner_blocks(self, s13):
        # removing any block and adding it back succeeds (Steiner property)
        for i in range(len(s13.edges)):
            rest = hypergraph(4, 13, s13.edges[:i] + s13.edges[i + 1:])
            back = add_edge_linear(rest, s13.edges[i])
            assert back == s13

    def test_never_breaks_linearity(self):
        rng = random.Random(11)
        for _ in range(100):
            h = random_linear(rng.randint(6, 14), rng.randint(0, 8), rng)
            e = tuple(sorted(rng.sample(range(h.n), 4)))
            try:
                h2 = add_edge_linear(h, e)
            except LinearityError:
                continue
            assert is_linear(h2) is not None


class TestLeave:
    def test_steiner_leave_empty(self, s13, s16):
        assert not leave_graph(s13).uncovered_pairs
        assert not leave_graph(s16).uncovered_pairs

    def test_small_packing_leave_count(self):
        # two disjoint blocks on 8 points cover 12 of the 28 pairs
        h = cons.packing_optimal_small(8).hypergraph
        assert len(leave_graph(h).uncovered_pairs) == 16

    def test_single_block_full_cover(self):
        assert not leave_graph(hypergraph(4, 4, [(0, 1, 2, 3)])).uncovered_pairs

    def test_nonlinear_rejected(self):
        h = hypergraph(4, 6, [(0, 1, 2, 3), (0, 1, 4, 5)])
        with pytest.raises(LinearityError):
            leave_graph(h)

    def test_partition_property(self):
        rng = random.Random(13)
        for _ in range(50):
            h = random_linear(rng.randint(5, 12), rng.randint(0, 9), rng)
            cov = is_linear(h)
            lv = leave_graph(h)
            allpairs = set(itertools.combinations(range(h.n), 2))
            assert set(cov.cover) | set(lv.uncovered_pairs) == allpairs
            assert not set(cov.cover) & set(lv.uncovered_pairs)
            assert len(cov.cover) == 6 * len(h.edges)


class TestDegreeSum:
    def test_handshake(self):
        rng = random.Random(17)
        for _ in range(50):
            h = random_linear(rng.randint(5, 16), rng.randint(0, 12), rng)
            assert sum(h.degrees) == 4 * len(h.edges)


class TestTextFormat:
    def test_steiner_round_trip(self, s13):
        text = serialize(s13)
        assert text.splitlines()[0] == "4 13 13"
        assert text.splitlines()[1] == "1 2 3 4"
        assert parse(text) == s13

    def test_comments_and_blanks(self):
        text = "# a design\n4 4 1\n\n1 2 3 4  # the only block\n"
        assert parse(text) == hypergraph(4, 4, [(0, 1, 2, 3)])

    def test_round_trip_random(self):
        rng = random.Random(19)
        for _ in range(1000):
            h = random_linear(rng.randint(4, 20), rng.randint(0, 10), rng)
            assert parse(serialize(h)) == h

    @pytest.mark.parametrize("text,lineno", [
        ("4 4\n", 1),                       # malformed header
        ("4 4 1\n1 2 3\n", 2),              # wrong arity
        ("4 4 1\n1 2 3 5\n", 2),            # out of range
        ("4 4 1\n1 1 2 3\n", 2),            # repeated vertex
        ("4 4 2\n1 2 3 4\n4 3 2 1\n", 3),   # duplicate edge
        ("4 4 2\n1 2 3 4\n", 1),            # edge count mismatch
        ("4 4 1\nx y z w\n", 2),            # non-integer
    ])
    def test_errors_carry_line_numbers(self, text, lineno):
        with pytest.raises(FormatError) as exc:
            parse(text)
        assert exc.value.line == lineno


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(4, 16), st.integers(0, 200))
def test_round_trip_hypothesis(n, seed):
    h = random_linear(n, 8, random.Random(seed))
    assert parse(serialize(h)) == h
