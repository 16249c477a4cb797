import random

import pytest

from helpers import random_linear
from linquad import bounds
from linquad import constructions as cons
from linquad import search
from linquad.hypergraph import (
    CapacityError,
    HypergraphError,
    hypergraph,
    is_linear,
    leave_graph,
    serialize,
)
from linquad.patterns import contains_matching, is_free, named_pattern


class TestSteinerSystems:
    def test_order13(self):
        built = cons.steiner_2_4_13()
        assert built.certificate.ok
        assert len(built.hypergraph.edges) == 13
        assert built.hypergraph.edges[0] == (0, 1, 2, 3)
        assert serialize(built.hypergraph).splitlines()[1] == "1 2 3 4"

    def test_order16(self):
        built = cons.steiner_2_4_16()
        assert built.certificate.ok
        assert len(built.hypergraph.edges) == 20
        assert set(built.hypergraph.degrees) == {5}

    def test_leaves_empty(self):
        for built in (cons.steiner_2_4_13(), cons.steiner_2_4_16()):
            assert not leave_graph(built.hypergraph).uncovered_pairs


class TestSts9:
    def test_shape(self):
        rts = cons.sts9_resolvable()
        assert rts.certificate.ok
        assert len(rts.base.edges) == 12
        assert len(rts.classes) == 4
        for cls in rts.classes:
            assert len(cls) == 3
            assert sorted(v for t in cls for v in t) == list(range(9))

    def test_pair_design(self):
        rts = cons.sts9_resolvable()
        cov = is_linear(rts.base)
        assert cov is not None and len(cov.cover) == 36


class TestE4plusConstruction:
    def test_minimum_order(self):
        built = cons.e4plus_free_construction(13)
        assert len(built.hypergraph.edges) == 12
        assert built.hypergraph.n == 13
        assert built.certificate.ok
        assert is_free(built.hypergraph, "E4plus")

    def test_two_copies_no_extra(self):
        built = cons.e4plus_free_construction(22)
        assert built.meta["copies"] == 2
        assert built.meta["target"] == 0
        assert len(built.hypergraph.edges) == 24

    def test_rejects_small_n(self):
        with pytest.raises(HypergraphError):
            cons.e4plus_free_construction(12)

    @pytest.mark.parametrize("n", [17, 19, 21, 27, 35, 48])
    def test_targets_met(self, n):
        built = cons.e4plus_free_construction(n)
        assert built.meta["achieved"] == built.meta["target"]
        assert built.certificate.ok
        assert len(built.hypergraph.edges) == \
            12 * built.meta["copies"] + built.meta["achieved"]


class TestSmallPackings:
    def test_block_lists(self):
        h8 = cons.packing_optimal_small(8).hypergraph
        assert h8.edges == ((0, 1, 2, 3), (4, 5, 6, 7))
        h11 = cons.packing_optimal_small(11).hypergraph
        assert len(h11.edges) == 6 and h11.edges[0] == (0, 1, 2, 3)
        h19 = cons.packing_optimal_small(19).hypergraph
        assert len(h19.edges) == 25

    def test_counts_match_formula(self):
        for m in (8, 9, 10, 11, 17, 19):
            built = cons.packing_optimal_small(m)
            assert built.certificate.ok
            assert len(built.hypergraph.edges) == bounds.packing_number(m).exact

    def test_unsupported_order(self):
        with pytest.raises(HypergraphError):
            cons.packing_optimal_small(12)


class TestClassifyLeave:
    def test_empty(self):
        lv = leave_graph(cons.steiner_2_4_13().hypergraph)
        assert cons.classify_leave(lv).kind == "empty"

    def test_star_for_m17(self):
        lv = leave_graph(cons.packing_optimal_small(17).hypergraph)
        cls = cons.classify_leave(lv)
        assert cls.kind == "star" and cls.star_size == 16

    def test_triangles_for_m12(self):
        h = search.exact_packing(12).witness
        cls = cons.classify_leave(leave_graph(h))
        assert cls.kind == "kK3" and len(cls.components) == 4
        assert cls.kind == cons.expected_leave_kind(12)

    def test_matching_leave(self):
        # one block on 8 points misses a perfect-matching-shaped leave;
        # build a 2-block m=8 packing: leave is K(4,4), i.e. "other"
        h = cons.packing_optimal_small(8).hypergraph
        assert cons.classify_leave(leave_graph(h)).kind == "other"

    def test_k2_components(self):
        pairs = {(0, 1), (2, 3), (4, 5)}
        lv = cons.LeaveGraph(6, frozenset(pairs))
        assert cons.classify_leave(lv).kind == "kK2"

    def test_k33(self):
        pairs = {(a, 3 + b) for a in range(3) for b in range(3)}
        lv = cons.LeaveGraph(6, frozenset(pairs))
        assert cons.classify_leave(lv).kind == "K33"

    def test_prism_is_not_k33(self):
        pairs = {(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                 (0, 3), (1, 4), (2, 5)}
        lv = cons.LeaveGraph(6, frozenset(pairs))
        assert cons.classify_leave(lv).kind == "other"

    def test_k6_minus_k4_plus_triangles(self):
        pairs = {(4, 5)} | {(i, 4) for i in range(4)} | {(i, 5) for i in range(4)}
        pairs |= {(6, 7), (6, 8), (7, 8)}
        lv = cons.LeaveGraph(9, frozenset(pairs))
        assert cons.classify_leave(lv).kind == "K6-K4+kK3"

    def test_k14_plus_matching(self):
        pairs = {(0, 1), (0, 2), (0, 3), (0, 4), (5, 6), (7, 8)}
        lv = cons.LeaveGraph(9, frozenset(pairs))
        assert cons.classify_leave(lv).kind == "K14+kK2"

    def test_render_round_trip(self):
        for pairs, n in [
            ({(0, 1), (2, 3)}, 4),
            ({(a, 3 + b) for a in range(3) for b in range(3)}, 6),
            ({(0, 1), (0, 2), (0, 3), (0, 4), (5, 6)}, 7),
        ]:
            cls = cons.classify_leave(cons.LeaveGraph(n, frozenset(pairs)))
            nverts, rendered = cons.render_leave(cls)
            cls2 = cons.classify_leave(cons.LeaveGraph(nverts, frozenset(rendered)))
            assert cls2.kind == cls.kind and cls2.components == cls.components

    def test_residue_predictions(self):
        # exact optimal packings for the non-exceptional m up to 13
        for m in (4, 5, 6, 7, 12, 13):
            h = search.exact_packing(m).witness
            cls = cons.classify_leave(leave_graph(h))
            assert cls.kind == cons.expected_leave_kind(m), m


class TestGLowerConstruction:
    @pytest.mark.parametrize("n,want", [(7, 2), (16, 5), (40, 13)])
    def test_k2_exact_counts(self, n, want):
        built = cons.g_lower_construction(n, 2)
        assert len(built.hypergraph.edges) == want == (n - 1) // 3
        # all quadruples pass through the single fixed vertex
        assert all(0 in e for e in built.hypergraph.edges)

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_small_k_sizes(self, k):
        for n in (4 * k - 4, 4 * k, 4 * k + 8):
            built = cons.g_lower_construction(n, k)
            assert built.certificate.ok
            a = set(built.meta["fixed_set"])
            assert all(a & set(e) for e in built.hypergraph.edges)
            assert len(built.hypergraph.edges) >= bounds.g_lower_formula(n, k)

    def test_preconditions(self):
        with pytest.raises(HypergraphError):
            cons.g_lower_construction(4 * 5 - 5, 5)
        with pytest.raises(HypergraphError):
            cons.g_lower_construction(10, 1)

    def test_deterministic(self):
        a = cons.g_lower_construction(20, 4, seed=0)
        b = cons.g_lower_construction(20, 4, seed=0)
        assert a.hypergraph == b.hypergraph


class TestSteinerUnion:
    def test_order13(self):
        built = cons.steiner_union_construction(13, 5)
        assert len(built.hypergraph.edges) == 13
        assert built.certificate.ok

    def test_two_components(self):
        from linquad.hypergraph import components

        built = cons.steiner_union_construction(26, 5)
        assert len(built.hypergraph.edges) == 26
        comps, _ = components(built.hypergraph)
        assert len(comps) == 2

    def test_order16_star_free(self):
        built = cons.steiner_union_construction(16, 6)
        assert len(built.hypergraph.edges) == 20
        assert is_free(built.hypergraph, named_pattern("S", 6))

    def test_single_blocks(self):
        built = cons.steiner_union_construction(8, 2)
        assert len(built.hypergraph.edges) == 2

    def test_inapplicable_params(self):
        with pytest.raises(HypergraphError):
            cons.steiner_union_construction(14, 5)

    def test_unavailable_order(self):
        # 3k-2 = 25 = 1 (mod 12), so a system exists, but no table is bundled
        with pytest.raises(CapacityError):
            cons.steiner_union_construction(25, 9)


class TestDisjointUnion:
    def test_identity(self):
        s13 = cons.steiner_2_4_13().hypergraph
        assert cons.disjoint_union(s13) == s13

    def test_p3_free_union(self):
        s13 = cons.steiner_2_4_13().hypergraph
        u = cons.disjoint_union(s13, s13)
        assert len(u.edges) == 26 and u.n == 26
        assert is_free(u, "P3")
        assert contains_matching(u, 2) is not None  # unions do contain M2

    def test_five_quarters(self):
        s16 = cons.steiner_2_4_16().hypergraph
        u = cons.disjoint_union(s16, s16)
        assert len(u.edges) == 40 and 4 * len(u.edges) == 5 * u.n

    def test_mixed_uniformity_rejected(self):
        s13 = cons.steiner_2_4_13().hypergraph
        sts = cons.sts9_resolvable().base
        with pytest.raises(HypergraphError):
            cons.disjoint_union(s13, sts)


class TestGeneratorsAlwaysLinear:
    def test_every_generator_output(self):
        rng = random.Random(47)
        outputs = [
            cons.steiner_2_4_13().hypergraph,
            cons.steiner_2_4_16().hypergraph,
            cons.e4plus_free_construction(19).hypergraph,
            cons.packing_optimal_small(11).hypergraph,
            cons.g_lower_construction(16, 4).hypergraph,
            cons.steiner_union_construction(16, 6).hypergraph,
            cons.best_packing(14),
        ]
        for h in outputs:
            assert is_linear(h) is not None
        # steiner degree relation d(v) = (n-1)/3
        for h in outputs[:2]:
            assert set(h.degrees) == {(h.n - 1) // 3}
