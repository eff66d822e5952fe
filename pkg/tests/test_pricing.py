import random
from fractions import Fraction as F

import pytest

from gpauction.caps import CapExceededError
from gpauction.demand import demand_set, verify_ce
from gpauction.linprog import OPTIMAL, GE, lp_solve
from gpauction.model import (
    GPoint,
    NEG_INF,
    PriceVector,
    Valuation,
    ValueGraph,
    char_vector,
)
from gpauction.pricing import (
    CoveringError,
    FOUND,
    INFEASIBLE_AT_POINT,
    NO_POINT_FOUND,
    big_M,
    build_ce_lp,
    ce_for_covering,
    ce_price_at_point,
    check_covering,
    optimal_ce,
    substitute_neg_inf,
)
from gpauction.randgen import (
    arbitrary_supply_instance,
    covering_instance,
    disjoint_clique_instance,
)
from gpauction.instances import corpus_instance

K3 = ValueGraph.complete(3)
K4 = ValueGraph.complete(4)
CUTLERY = corpus_instance("cutlery").valuations
SHIFTED = corpus_instance("cutlery-shifted").valuations


class TestBigM:
    def test_unit_weights(self):
        vs = [Valuation(K3, (F(1), F(-1), F(1), F(-1), F(1), F(-1)))]
        assert big_M(vs) == 15

    def test_zero_weights(self):
        assert big_M([Valuation.zero(K3)]) == 8

    def test_ignores_neg_inf_entries(self):
        vs = [Valuation(K3, (NEG_INF, F(1), F(1), F(0), F(0), F(0)))]
        assert big_M(vs) == 15

    def test_needs_a_finite_weight(self):
        vs = [Valuation(K3, (NEG_INF,) * 3 + (F(0),) * 3)]
        assert big_M(vs) == 8
        all_inf = Valuation(K3, (NEG_INF,) * 3 + (NEG_INF,) * 3)
        with pytest.raises(ValueError):
            big_M([all_inf])

    def test_substitution(self):
        v = Valuation(K3, (NEG_INF, F(2), F(0), F(0), F(0), F(0)))
        sub = substitute_neg_inf(v, F(9))
        assert sub.weights[0] == -9 and sub.weights[1] == 2


class TestCeLp:
    def test_cutlery_singletons_lp_admits_unit_edge_price(self):
        alloc = (frozenset({0}), frozenset({1}), frozenset({2}))
        lp = build_ce_lp(CUTLERY, alloc, GPoint(K3, (1, 1, 1, 0, 0, 0)))
        res = lp_solve(lp)
        assert res.status == OPTIMAL
        p = (F(0), F(0), F(0), F(1), F(1), F(1))
        for coeffs, rel, rhs in lp.rows:
            assert rel == GE
            assert sum(c * x for c, x in zip(coeffs, p)) >= rhs

    def test_full_lp_matches_lazy_solution(self):
        point = GPoint(K3, (1, 1, 1, 1, 0, 0))
        res = ce_price_at_point(CUTLERY, point)
        lp = build_ce_lp(CUTLERY, res.allocation, point)
        assert lp_solve(lp).value == res.revenue


class TestCePriceAtPoint:
    def test_cutlery_singletons_revenue_zero(self):
        res = ce_price_at_point(CUTLERY, GPoint(K3, (1, 1, 1, 0, 0, 0)))
        assert res.status == FOUND
        assert res.revenue == 0

    def test_cutlery_pair_point_revenue_one(self):
        res = ce_price_at_point(CUTLERY, GPoint(K3, (1, 1, 1, 1, 0, 0)))
        assert res.status == FOUND
        assert res.revenue == 1
        assert res.price.dot(res.point) == 1

    def test_k4_idp_point_infeasible(self):
        vs = [Valuation.zero(K4)] * 4
        res = ce_price_at_point(vs, GPoint(K4, (2, 2, 2, 2, 1, 1, 1, 1, 1, 1)))
        assert res.status == INFEASIBLE_AT_POINT

    def test_found_results_verify_exactly(self):
        res = ce_price_at_point(CUTLERY, GPoint(K3, (1, 1, 1, 1, 0, 0)))
        verdict = verify_ce(CUTLERY, res.allocation, res.price)
        assert verdict.ok and verdict.revenue == res.revenue

    def test_rejects_neg_inf_weights(self):
        vs = [Valuation(K3, (NEG_INF, F(0), F(0), F(0), F(0), F(0)))]
        with pytest.raises(ValueError, match="covering"):
            ce_price_at_point(vs, GPoint.zero(K3))

    def test_caps(self):
        g = ValueGraph.complete(7)
        with pytest.raises(CapExceededError):
            ce_price_at_point([Valuation.zero(g)], GPoint.zero(g))


class TestOptimalCe:
    def test_cutlery_revenue_one(self):
        res = optimal_ce(CUTLERY, (1, 1, 1))
        assert res.status == FOUND and res.revenue == 1

    def test_shifted_revenue_seven(self):
        res = optimal_ce(SHIFTED, (1, 1, 1))
        assert res.status == FOUND and res.revenue == 7

    def test_zero_supply(self):
        vs = [Valuation.zero(K3)]
        res = optimal_ce(vs, (0, 0, 0))
        assert res.status == FOUND
        assert res.revenue == 0
        assert res.allocation == (frozenset(),)
        assert res.price == PriceVector.zero(K3)

    def test_tie_breaks_to_lex_smallest_point(self):
        res = optimal_ce([Valuation.zero(K3)] * 2, (1, 1, 0))
        assert res.status == FOUND and res.revenue == 0
        assert res.point.coords == (1, 1, 0, 0, 0, 0)

    def test_jobs_flag_does_not_change_result(self):
        seq = optimal_ce(SHIFTED, (1, 1, 1))
        par = optimal_ce(SHIFTED, (1, 1, 1), jobs=4)
        assert (seq.revenue, seq.point, seq.allocation, seq.price) == (
            par.revenue,
            par.point,
            par.allocation,
            par.price,
        )

    def test_supply_above_m_rejected(self):
        with pytest.raises(ValueError, match="supply"):
            optimal_ce([Valuation.zero(K3)], (2, 0, 0))

    def test_walrasian_mode_bounded_by_quadratic(self):
        res_q = optimal_ce(SHIFTED, (1, 1, 1))
        res_w = optimal_ce(SHIFTED, (1, 1, 1), walrasian=True)
        assert res_w.status == FOUND
        assert res_w.price.linear_only
        assert res_w.revenue <= res_q.revenue

    def test_walrasian_not_found_is_certified(self):
        res = optimal_ce(CUTLERY, (1, 1, 1), walrasian=True)
        assert res.status == NO_POINT_FOUND

    def test_dominates_every_candidate_point(self):
        from gpauction.demand import candidate_points

        best = optimal_ce(CUTLERY, (1, 1, 1))
        for a in candidate_points(K3, (1, 1, 1)):
            res = ce_price_at_point(CUTLERY, a)
            if res.status == FOUND:
                assert best.revenue >= res.revenue


class TestCeForCovering:
    def test_all_agents_on_full_graph(self):
        vs = [
            Valuation(K3, tuple(F(k) for k in (1, 2, 0, 1, 0, 1))),
            Valuation(K3, tuple(F(k) for k in (0, 1, 2, 0, 1, 0))),
        ]
        a = char_vector([0, 1, 2], K3)
        res = ce_for_covering(vs, (1, 1, 1), a)
        assert res.status == FOUND

    def test_two_clique_bidders(self):
        w1 = (F(2), F(3), NEG_INF, F(1), NEG_INF, NEG_INF)
        w2 = (NEG_INF, F(1), F(2), NEG_INF, NEG_INF, F(2))
        vs = [Valuation(K3, w1), Valuation(K3, w2)]
        a = char_vector([0, 1], K3) + char_vector([2], K3)
        res = ce_for_covering(vs, (1, 1, 1), a)
        assert res.status == FOUND
        supports = [v.support for v in vs]
        for b, S in enumerate(res.allocation):
            assert S <= supports[b]
        for b, v in enumerate(vs):
            for S in demand_set(v, res.price).bundles:
                assert S <= supports[b]

    def test_non_covering_rejected(self):
        w1 = (F(1), F(0), NEG_INF, F(0), NEG_INF, NEG_INF)
        w2 = (F(0), F(1), NEG_INF, F(0), NEG_INF, NEG_INF)
        vs = [Valuation(K3, w1), Valuation(K3, w2)]
        with pytest.raises(CoveringError, match="no agent's support"):
            ce_for_covering(vs, (1, 1, 0), GPoint.zero(K3))

    def test_incompatible_point_rejected(self):
        w1 = (F(2), F(3), NEG_INF, F(1), NEG_INF, NEG_INF)
        w2 = (NEG_INF, F(1), F(2), NEG_INF, NEG_INF, F(2))
        vs = [Valuation(K3, w1), Valuation(K3, w2)]
        bad = GPoint(K3, (1, 1, 1, 0, 1, 0))  # edge 1-3 in nobody's support
        with pytest.raises(ValueError, match="outside every agent"):
            ce_for_covering(vs, (1, 1, 1), bad)

    def test_forced_stray_copy_is_certified_infeasible(self):
        # both copies of the full clique must go somewhere, but only one
        # agent can value it: no CE sells exactly this point
        v0 = Valuation(K4, tuple(F(1) for _ in range(K4.d)))
        v1 = Valuation(K4, (F(2),) + (NEG_INF,) * 3 + (NEG_INF,) * 6)
        point = GPoint(K4, (2,) * 10)
        res = ce_for_covering([v0, v1], (2, 2, 2, 2), point)
        assert res.status == INFEASIBLE_AT_POINT

    def test_inside_support_edges_must_be_finite(self):
        w = (F(1), F(1), F(1), NEG_INF, F(0), F(0))
        with pytest.raises(CoveringError, match="inside the support"):
            check_covering([Valuation(K3, w)])


class TestExistenceSuitesMini:
    def test_disjoint_clique_points_always_priceable(self):
        rng = random.Random(101)
        for _ in range(25):
            vs, supply, point = disjoint_clique_instance(rng)
            res = ce_price_at_point(vs, point)
            assert res.status == FOUND
            assert verify_ce(vs, res.allocation, res.price).ok

    def test_nested_chain_points_always_priceable(self):
        rng = random.Random(102)
        for _ in range(25):
            vs, supply, point = arbitrary_supply_instance(rng)
            res = ce_price_at_point(vs, point)
            assert res.status == FOUND

    def test_covering_instances_always_priceable(self):
        rng = random.Random(103)
        for _ in range(15):
            vs, supply, point = covering_instance(rng)
            res = ce_for_covering(vs, supply, point)
            assert res.status == FOUND
            supports = [v.support for v in vs]
            for b, S in enumerate(res.allocation):
                assert S <= supports[b]

    def test_walrasian_found_implies_quadratic_found(self):
        rng = random.Random(104)
        hits = 0
        for _ in range(20):
            vs, supply, point = disjoint_clique_instance(rng)
            res_w = ce_price_at_point(vs, point, walrasian=True)
            if res_w.status != FOUND:
                continue
            hits += 1
            res_q = ce_price_at_point(vs, point)
            assert res_q.status == FOUND
            assert res_q.revenue >= res_w.revenue
        assert hits > 0
