from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gpauction.demand import (
    candidate_points,
    demand_set,
    max_welfare,
    seller_demand,
    verify_ce,
    verify_pe,
    walrasian_exists,
)
from gpauction.model import (
    GPoint,
    NEG_INF,
    PriceVector,
    Valuation,
    ValueGraph,
    char_vector,
    shift,
    value,
)
from gpauction.instances import corpus_instance

from .strategies import graphs, small_fractions, valuations

K3 = ValueGraph.complete(3)
CUTLERY = corpus_instance("cutlery").valuations
SHIFTED = corpus_instance("cutlery-shifted").valuations
P_EDGES = PriceVector(K3, (F(0), F(0), F(0), F(1), F(1), F(1)))
P_SHIFTED = PriceVector(K3, (F(3), F(3), F(1), F(0), F(0), F(0)))

A, B, C = frozenset({0}), frozenset({1}), frozenset({2})
AB, ABC = frozenset({0, 1}), frozenset({0, 1, 2})
EMPTY = frozenset()


def brute_force_demand(v, p):
    """Independent oracle: scan all bundles directly."""
    n = v.graph.n
    best, best_bundles = None, set()
    for mask in range(1 << n):
        S = frozenset(i for i in range(n) if mask >> i & 1)
        val = value(v, S)
        if val == NEG_INF:
            continue
        u = val - p.of_bundle(S)
        if best is None or u > best:
            best, best_bundles = u, {S}
        elif u == best:
            best_bundles.add(S)
    return best, best_bundles


class TestDemandSet:
    def test_cutlery_agent1_at_edge_price(self):
        ds = demand_set(CUTLERY[0], P_EDGES)
        expected_best, expected = brute_force_demand(CUTLERY[0], P_EDGES)
        assert ds.utility_value == expected_best == 0
        assert ds.bundles == expected == {EMPTY, A, B, C, AB}

    def test_zero_price_demands_full_support(self):
        v = Valuation(K3, (F(1), F(0), F(2), F(0), F(1), F(0)))
        ds = demand_set(v, PriceVector.zero(K3))
        assert ABC in ds.bundles

    def test_shifted_agent1_demands_everything_bundle(self):
        ds = demand_set(SHIFTED[0], P_SHIFTED)
        assert ABC in ds.bundles

    def test_neg_inf_items_never_demanded(self):
        v = Valuation(K3, (F(5), NEG_INF, F(1), F(0), F(0), F(0)))
        ds = demand_set(v, PriceVector.zero(K3))
        assert all(1 not in S for S in ds.bundles)

    def test_support_cap(self):
        from gpauction.caps import CapExceededError

        g = ValueGraph.complete(7)
        with pytest.raises(CapExceededError):
            demand_set(Valuation.zero(g), PriceVector.zero(g))

    def test_empty_bundle_when_utility_zero(self):
        v = Valuation(K3, (F(-1),) * 6)
        ds = demand_set(v, PriceVector.zero(K3))
        assert ds.utility_value == 0
        assert EMPTY in ds.bundles

    @given(graphs(max_n=4), st.data())
    @settings(max_examples=60)
    def test_matches_brute_force(self, g, data):
        v = data.draw(valuations(g, allow_neg_inf=True))
        p = PriceVector(g, tuple(data.draw(small_fractions()) for _ in range(g.d)))
        ds = demand_set(v, p)
        best, bundles = brute_force_demand(v, p)
        assert ds.utility_value == best
        assert ds.bundles == bundles

    @given(graphs(max_n=4), st.data())
    @settings(max_examples=60)
    def test_shift_invariance(self, g, data):
        v = data.draw(valuations(g, allow_neg_inf=True))
        p = tuple(data.draw(small_fractions()) for _ in range(g.d))
        c = tuple(data.draw(small_fractions()) for _ in range(g.d))
        before = demand_set(v, PriceVector(g, p))
        after = demand_set(
            shift(v, c), PriceVector(g, tuple(a + b for a, b in zip(p, c)))
        )
        assert before.bundles == after.bundles


class TestMaxWelfare:
    def test_cutlery_full_point(self):
        w, alloc = max_welfare(CUTLERY, GPoint(K3, (1, 1, 1, 1, 1, 1)))
        assert w == 1
        assert sorted(map(len, alloc)) == [0, 0, 3]

    def test_single_agent_char_vector(self):
        v = Valuation(K3, (F(2), F(0), F(1), F(-1), F(0), F(4)))
        a = char_vector([0, 2], K3)
        w, alloc = max_welfare([v], a)
        assert w == value(v, {0, 2}) == 3
        assert alloc == (frozenset({0, 2}),)

    def test_cutlery_singletons_point(self):
        w, alloc = max_welfare(CUTLERY, GPoint(K3, (1, 1, 1, 0, 0, 0)))
        assert w == 0

    def test_non_decomposable_marker(self):
        K4 = ValueGraph.complete(4)
        vs = [Valuation.zero(K4)] * 4
        w, alloc = max_welfare(vs, GPoint(K4, (2, 2, 2, 2, 1, 1, 1, 1, 1, 1)))
        assert w == NEG_INF and alloc is None

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_witness_attains_and_dominates(self, data):
        g = ValueGraph.complete(data.draw(st.integers(1, 3)))
        m = data.draw(st.integers(1, 3))
        vs = [data.draw(valuations(g)) for _ in range(m)]
        from gpauction.polytope import vertices_P, enumerate_decompositions
        import itertools

        total = GPoint.zero(g)
        for _ in range(m):
            total = total + data.draw(st.sampled_from(vertices_P(g)))
        w, alloc = max_welfare(vs, total)
        assert sum(value(vs[b], S) for b, S in enumerate(alloc)) == w
        for parts in enumerate_decompositions(total, m):
            for perm in set(itertools.permutations(parts)):
                assert sum(value(vs[b], S) for b, S in enumerate(perm)) <= w


class TestVerifyCE:
    def test_singletons_pass(self):
        assert verify_ce(CUTLERY, (A, B, C), P_EDGES).ok

    def test_pair_allocation_passes_with_revenue_one(self):
        verdict = verify_ce(CUTLERY, (AB, C, EMPTY), P_EDGES)
        assert verdict.ok and verdict.revenue == 1

    def test_all_to_one_fails_with_witness(self):
        verdict = verify_ce(CUTLERY, (ABC, EMPTY, EMPTY), P_EDGES)
        assert not verdict.ok
        (w,) = verdict.failures
        assert w.agent == 0 and w.assigned == ABC
        assert w.assigned_utility == -2
        assert w.better_utility == 0

    def test_demand_level_equivalence(self):
        # pass iff each agent's utility equals their demand-set optimum
        for alloc in [(A, B, C), (AB, C, EMPTY), (ABC, EMPTY, EMPTY)]:
            verdict = verify_ce(CUTLERY, alloc, P_EDGES)
            expected = all(
                value(v, S) - P_EDGES.of_bundle(S) == demand_set(v, P_EDGES).utility_value
                for v, S in zip(CUTLERY, alloc)
            )
            assert verdict.ok == expected


class TestSellerDemand:
    def test_cutlery_edge_price(self):
        sd = seller_demand(P_EDGES, (1, 1, 1), 3)
        assert sd == {GPoint(K3, (1, 1, 1, 1, 1, 1))}
        assert P_EDGES.dot(next(iter(sd))) == 3

    def test_zero_price_all_tie(self):
        sd = seller_demand(PriceVector.zero(K3), (1, 1, 1), 3)
        decomposable = {
            a for a in candidate_points(K3, (1, 1, 1))
            if a.coords != (1, 1, 1, 1, 1, 0)
            and a.coords != (1, 1, 1, 1, 0, 1)
            and a.coords != (1, 1, 1, 0, 1, 1)
        }
        assert sd == decomposable

    def test_shifted_price_revenue_seven(self):
        sd = seller_demand(P_SHIFTED, (1, 1, 1), 3)
        best = P_SHIFTED.dot(next(iter(sd)))
        assert best == 7
        assert GPoint(K3, (1, 1, 1, 1, 1, 1)) in sd


class TestVerifyPE:
    def test_cutlery_ce_is_not_pe(self):
        verdict = verify_pe(CUTLERY, (AB, C, EMPTY), P_EDGES, (1, 1, 1))
        assert verdict.ce.ok and not verdict.ok
        assert verdict.revenue == 1 and verdict.seller_best_revenue == 3

    def test_shifted_pe_passes(self):
        verdict = verify_pe(SHIFTED, (ABC, EMPTY, EMPTY), P_SHIFTED, (1, 1, 1))
        assert verdict.ok and verdict.revenue == 7
        # a passing PE attains the seller optimum, so no CE at this price
        # can bring more revenue
        assert verdict.revenue == verdict.seller_best_revenue

    def test_trivial_empty_auction(self):
        v = Valuation.zero(K3)
        verdict = verify_pe([v], (EMPTY,), PriceVector.zero(K3), (0, 0, 0))
        assert verdict.ok and verdict.revenue == 0

    def test_supply_mismatch(self):
        with pytest.raises(ValueError, match="supply"):
            verify_pe(CUTLERY, (A, B, C), P_EDGES, (1, 1, 0))

    def test_pe_implies_ce(self):
        verdict = verify_pe(SHIFTED, (ABC, EMPTY, EMPTY), P_SHIFTED, (1, 1, 1))
        assert verdict.ok and verdict.ce.ok


class TestWalrasian:
    def test_cutlery_has_none(self):
        assert walrasian_exists(CUTLERY, (1, 1, 1)) is None

    def test_shifted_has_one(self):
        found = walrasian_exists(SHIFTED, (1, 1, 1))
        assert found is not None
        price, alloc = found
        assert price.linear_only
        assert verify_ce(SHIFTED, alloc, price).ok

    def test_single_additive_agent(self):
        v = Valuation(K3, (F(2), F(3), F(1), F(0), F(0), F(0)))
        found = walrasian_exists([v], (1, 1, 1))
        assert found is not None
        price, alloc = found
        assert verify_ce([v], alloc, price).ok
        assert price.dot(char_vector([0, 1, 2], K3)) == 6
