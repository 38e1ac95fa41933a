"""Exact-rational LP feasibility oracle."""

from itertools import combinations

import pytest

from fracdecomp.graph import Graph, complete_graph, enumerate_cliques, verify_weighting
from fracdecomp.kminusm import decompose_clique_minus_matching
from fracdecomp.lp import BudgetExceeded, lp_approx_weighting, lp_feasible
from fracdecomp.rational import ONE, ZERO, rat


def minus(k, edges):
    return Graph(k, set(complete_graph(k).edges) - {tuple(sorted(e)) for e in edges})


class TestFeasible:
    def test_k5_uniform_exists(self):
        out = lp_feasible(complete_graph(5), 3)
        assert out.feasible
        assert verify_weighting(complete_graph(5), out.weighting).ok

    def test_deterministic(self):
        a = lp_feasible(complete_graph(6), 3)
        b = lp_feasible(complete_graph(6), 3)
        assert dict(a.weighting.weights) == dict(b.weighting.weights)

    def test_k8_minus_two_edges_agrees_with_construction(self):
        matching = [(0, 1), (2, 3)]
        g = minus(8, matching)
        constructed = decompose_clique_minus_matching(3, 8, matching)
        assert verify_weighting(g, constructed).ok
        out = lp_feasible(g, 3)
        assert out.feasible

    def test_rational_target(self):
        g = complete_graph(8)
        target = {e: rat(6, 7) for e in g.edge_list()}
        out = lp_feasible(g, 3, target)
        assert out.feasible
        assert verify_weighting(g, out.weighting, target).ok


class TestInfeasible:
    def test_star_certificate(self):
        star = Graph(4, [(0, 1), (0, 2), (0, 3)])
        out = lp_feasible(star, 3)
        assert not out.feasible
        y = out.certificate.y
        # no triangles at all, so the clique-side inequality is vacuous
        assert sum(y.get(e, ZERO) * ONE for e in star.edge_list()) > 0

    def test_k4_minus_edge_requires_overweight(self):
        # triangles {0,1,2} and {0,1,3} share edge (0,1): forcing the
        # pendant edges to 1 forces (0,1) to 2
        g = minus(4, [(2, 3)])
        out = lp_feasible(g, 3)
        assert not out.feasible
        cert = out.certificate
        cliques = enumerate_cliques(g, 3)
        for clique in cliques:
            total = sum(
                (cert.y.get(e, ZERO) for e in combinations(clique, 2)), start=ZERO
            )
            assert total <= 0
        paid = sum(cert.y.values(), start=ZERO)
        assert paid > 0

    def test_no_triangle_cycle(self):
        c5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        out = lp_feasible(c5, 3)
        assert not out.feasible

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            lp_feasible(complete_graph(12), 3, max_variables=10)


class TestSlab:
    def test_k8_single_clique(self):
        out = lp_approx_weighting(complete_graph(8), 3)
        assert out.feasible
        sums = out.weighting.edge_sums()
        lo = ONE - rat(1, 7)
        for e in complete_graph(8).edge_list():
            assert lo <= sums[e] <= 1

    def test_k10_minus_perfect_matching_is_provably_infeasible(self):
        # clique number 5: every 8-subset contains a removed pair
        g = minus(10, [(2 * i, 2 * i + 1) for i in range(5)])
        assert enumerate_cliques(g, 8) == []
        out = lp_approx_weighting(g, 3)
        assert not out.feasible
        assert len(out.witness_edges) == len(g.edges)
        assert "no clique of order 8" in out.detail

    def test_host_too_small(self):
        out = lp_approx_weighting(complete_graph(6), 3)
        assert not out.feasible

    def test_feeds_lift(self):
        from fracdecomp.correction import lift_to_exact

        g = complete_graph(9)
        out = lp_approx_weighting(g, 3)
        assert out.feasible
        lifted = lift_to_exact(g, out.weighting, 3)
        assert verify_weighting(g, lifted, 1).ok
