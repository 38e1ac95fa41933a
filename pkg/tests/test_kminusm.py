"""Closed-form decomposition of complete graphs minus matchings."""

import pytest

from fracdecomp.graph import Graph, complete_graph, verify_weighting
from fracdecomp.kminusm import (
    base_class_weights,
    class_weights,
    closed_form_type_weights,
    decompose_by_subset_recursion,
    decompose_clique_minus_matching,
    edge_type_counts,
    type_class_size,
)
from fracdecomp.rational import ZERO, rat


def k_minus_matching(k, matching):
    return Graph(k, set(complete_graph(k).edges) - {tuple(sorted(e)) for e in matching})


def canonical_matching(m):
    return [(2 * i, 2 * i + 1) for i in range(m)]


class TestEdgeTypeCounts:
    @pytest.mark.parametrize(
        "r,m,expected",
        [(3, 1, (15, 12, 0)), (3, 0, (28, 0, 0)), (4, 4, (1, 16, 24))],
    )
    def test_spot_values(self, r, m, expected):
        assert edge_type_counts(r, m) == expected

    @pytest.mark.parametrize("r", [3, 4, 5])
    def test_against_brute_force_classification(self, r):
        # oracle: classify every edge of the concrete graph by how many
        # endpoints are matched
        for m in range(0, r + 2):
            matching = canonical_matching(m)
            g = k_minus_matching(2 * r + 2, matching)
            matched = {v for e in matching for v in e}
            counts = [0, 0, 0]
            for u, v in g.edges:
                counts[len({u, v} & matched)] += 1
            assert tuple(counts) == edge_type_counts(r, m)


class TestClosedForm:
    def test_spot_value_r3_m1(self):
        tw = closed_form_type_weights(3, 1)
        assert (tw.k1, tw.k2, tw.k3) == (1, 0, 0)
        assert (tw.x, tw.y, tw.z) == (rat(6), rat(2), rat(1))

    def test_spot_value_r4_m4(self):
        tw = closed_form_type_weights(4, 4)
        assert (tw.k1, tw.k2, tw.k3) == (4, 3, 2)
        assert (tw.x, tw.y, tw.z) == (rat(11, 6), rat(4), rat(1))

    def test_first_branch_taken_r3_m3(self):
        tw = closed_form_type_weights(3, 3)
        assert tw.k3 == 2 * 3 - 3 - 2 == 1
        assert tw.residual() == (ZERO, ZERO, ZERO)

    @pytest.mark.parametrize("r", range(3, 13))
    def test_residual_identically_zero(self, r):
        for m in range(1, r + 1):
            tw = closed_form_type_weights(r, m)
            assert tw.residual() == (ZERO, ZERO, ZERO)
            assert tw.x >= 0 and tw.y >= 0 and tw.z >= 0

    def test_rejects_m_out_of_range(self):
        with pytest.raises(ValueError):
            closed_form_type_weights(3, 0)
        with pytest.raises(ValueError):
            closed_form_type_weights(3, 4)


class TestClassSizes:
    @pytest.mark.parametrize("r,m", [(3, 1), (3, 2), (4, 3), (5, 5)])
    def test_against_enumeration(self, r, m):
        k = 2 * r + 2
        matching = canonical_matching(m)
        g = k_minus_matching(k, matching)
        matched = {v for e in matching for v in e}
        from fracdecomp.graph import enumerate_cliques

        by_level = {}
        for clique in enumerate_cliques(g, r):
            level = len(set(clique) & matched)
            by_level[level] = by_level.get(level, 0) + 1
        for level in range(0, m + 1):
            assert by_level.get(level, 0) == type_class_size(r, k, m, level)

    def test_represented_classes_nonempty(self):
        for r in (3, 4, 5, 6):
            for m in range(0, r + 2):
                weights = base_class_weights(r, m)
                for level in weights.per_clique:
                    assert weights.class_size(level) > 0


class TestDecomposeMinimal:
    def test_k8_one_edge_exact_values(self):
        # matched-vertex cliques carry 6/30 = 1/5, the rest (2+1)/20 = 3/20
        w = decompose_clique_minus_matching(3, 8, [(0, 1)])
        for clique, value in w.weights.items():
            if 0 in clique or 1 in clique:
                assert value == rat(1, 5)
            else:
                assert value == rat(3, 20)
        by_value = {}
        for clique, value in w.weights.items():
            by_value[value] = by_value.get(value, 0) + 1
        assert by_value == {rat(1, 5): 30, rat(3, 20): 20}
        assert verify_weighting(k_minus_matching(8, [(0, 1)]), w).ok

    def test_k8_uniform_cases(self):
        w0 = decompose_clique_minus_matching(3, 8, [])
        assert set(w0.weights.values()) == {rat(1, 6)}
        assert verify_weighting(complete_graph(8), w0).ok

        pm = canonical_matching(4)
        w4 = decompose_clique_minus_matching(3, 8, pm)
        assert set(w4.weights.values()) == {rat(1, 4)}
        assert verify_weighting(k_minus_matching(8, pm), w4).ok

    @pytest.mark.parametrize("r", [3, 4])
    def test_all_matching_sizes_verify(self, r):
        for m in range(0, r + 2):
            matching = canonical_matching(m)
            w = decompose_clique_minus_matching(r, 2 * r + 2, matching)
            assert all(v >= 0 for v in w.weights.values())
            assert verify_weighting(k_minus_matching(2 * r + 2, matching), w).ok

    def test_relabeling_invariance(self):
        w1 = decompose_clique_minus_matching(3, 8, [(0, 1), (2, 3)])
        other = [(4, 7), (2, 6)]
        w2 = decompose_clique_minus_matching(3, 8, other)
        # isomorphism mapping the first matching onto the second
        iso = {0: 4, 1: 7, 2: 2, 3: 6}
        rest = [v for v in range(8) if v not in iso]
        free = [v for v in range(8) if v not in iso.values()]
        iso.update(dict(zip(rest, free)))
        transported = {
            tuple(sorted(iso[v] for v in clique)): value
            for clique, value in w1.weights.items()
        }
        assert transported == dict(w2.weights)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            decompose_clique_minus_matching(2, 8, [])
        with pytest.raises(ValueError):
            decompose_clique_minus_matching(3, 7, [])
        with pytest.raises(ValueError):
            decompose_clique_minus_matching(3, 8, [(0, 1), (1, 2)])


class TestLargerHosts:
    @pytest.mark.parametrize("k", [9, 10])
    def test_class_form_equals_subset_recursion(self, k):
        for matching in ([], [(0, 1)], [(0, 1), (2, 3)], canonical_matching(4)):
            got = decompose_clique_minus_matching(3, k, matching)
            ref = decompose_by_subset_recursion(3, k, matching)
            assert dict(got.weights) == dict(ref.weights)
            assert verify_weighting(k_minus_matching(k, matching), got).ok

    def test_k10_minus_perfect_matching(self):
        pm = canonical_matching(5)
        w = decompose_clique_minus_matching(3, 10, pm)
        g = k_minus_matching(10, pm)
        assert verify_weighting(g, w).ok
        assert len(w.weights) == 80  # all triangles of the host

    def test_compressed_class_sums(self):
        for k in (8, 9, 12, 15):
            for m in (0, 1, 3, 4):
                if 2 * m > k:
                    continue
                weights = class_weights(3, k, m)
                assert all(s == 1 for s in weights.edge_class_sums().values())

    def test_support_budget(self):
        with pytest.raises(ValueError):
            decompose_clique_minus_matching(3, 30, [], max_support=100)
