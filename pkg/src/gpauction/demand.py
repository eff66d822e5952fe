"""Demand sets, aggregate welfare, and the equilibrium verifiers.

A competitive equilibrium (CE) requires every agent to receive a bundle
from their demand set at the announced price; a pricing equilibrium (PE)
additionally requires the sold aggregate to maximize seller revenue over
all attainable aggregates with the same projection; a Walrasian
equilibrium is a CE under linear (vertex-only) pricing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .caps import DEFAULT_CAPS, Caps
from .model import (
    Allocation,
    Bundle,
    EMPTY_BUNDLE,
    GPoint,
    NEG_INF,
    PriceVector,
    Valuation,
    ValueGraph,
    Weight,
    aggregate,
    is_finite,
    project,
    value,
)
from .polytope import enumerate_decompositions


@dataclass(frozen=True)
class DemandSet:
    """All utility-maximizing bundles of one agent at one price."""

    price: PriceVector
    bundles: frozenset[Bundle]
    utility_value: Fraction
    agent: Optional[int] = None


def demand_set(
    v: Valuation, p: PriceVector, caps: Caps = DEFAULT_CAPS, agent: Optional[int] = None
) -> DemandSet:
    """Argmax of value minus price over all bundles. Only subsets of the
    finite support can compete: anything else is dominated by the empty
    bundle, which is always considered."""
    if v.graph != p.graph:
        raise ValueError("valuation and price over different graphs")
    support = sorted(v.support)
    caps.check_n(len(support))
    best = Fraction(0)
    best_bundles = {EMPTY_BUNDLE}
    for mask in range(1, 1 << len(support)):
        S = frozenset(support[i] for i in range(len(support)) if mask >> i & 1)
        val = value(v, S)
        if not is_finite(val):  # a -inf edge weight inside the support
            continue
        u = val - p.of_bundle(S)
        if u > best:
            best = u
            best_bundles = {S}
        elif u == best:
            best_bundles.add(S)
    return DemandSet(p, frozenset(best_bundles), best, agent)


def _bundle_key(S: Bundle) -> tuple[int, ...]:
    return tuple(sorted(S))


def _alloc_key(alloc: Sequence[Bundle]) -> tuple:
    per_agent = tuple(_bundle_key(S) for S in alloc)
    return (tuple(sorted(per_agent)), per_agent)


def max_welfare(
    vs: Sequence[Valuation], a: GPoint, caps: Caps = DEFAULT_CAPS
) -> tuple[Weight, Optional[Allocation]]:
    """Maximal total value over all ways to split a into m demandable
    bundles, matching parts to agents. Returns (NEG_INF, None) when a is
    not decomposable; otherwise the optimum with a deterministic witness
    (lexicographically least among the maximizers)."""
    m = len(vs)
    g = a.graph
    if any(v.graph != g for v in vs):
        raise ValueError("valuations and point over different graphs")
    best: Weight = NEG_INF
    best_alloc: Optional[Allocation] = None
    best_key = None
    for parts in enumerate_decompositions(a, m, caps):
        for perm in sorted(set(itertools.permutations(parts))):
            total: Weight = Fraction(0)
            for b, S in enumerate(perm):
                val = value(vs[b], S)
                if not is_finite(val):
                    total = NEG_INF
                    break
                total += val
            key = _alloc_key(perm)
            if best_alloc is None or total > best or (total == best and key < best_key):
                best, best_alloc, best_key = total, perm, key
    return best, best_alloc


@dataclass(frozen=True)
class AgentWitness:
    """A strictly better bundle for an agent whose assignment is undemanded."""

    agent: int
    assigned: Bundle
    assigned_utility: Weight
    better: Bundle
    better_utility: Fraction


@dataclass(frozen=True)
class CEVerdict:
    ok: bool
    revenue: Fraction
    failures: tuple[AgentWitness, ...]


def verify_ce(
    vs: Sequence[Valuation],
    alloc: Allocation,
    p: PriceVector,
    caps: Caps = DEFAULT_CAPS,
) -> CEVerdict:
    """Check that every agent's assigned bundle lies in their demand set;
    failures carry a strictly better bundle as witness."""
    if len(alloc) != len(vs):
        raise ValueError("allocation and valuation counts differ")
    g = p.graph
    failures = []
    for b, (v, S) in enumerate(zip(vs, alloc)):
        ds = demand_set(v, p, caps, agent=b)
        if S in ds.bundles:
            continue
        val = value(v, S)
        assigned_u = val - p.of_bundle(S) if is_finite(val) else NEG_INF
        better = min(ds.bundles, key=_bundle_key)
        failures.append(
            AgentWitness(b, S, assigned_u, better, ds.utility_value)
        )
    revenue = p.dot(aggregate(g, alloc))
    return CEVerdict(not failures, revenue, tuple(failures))


def candidate_points(graph: ValueGraph, supply: Sequence[int]) -> Iterator[GPoint]:
    """All integer points over the graph projecting onto the supply, with
    each edge coordinate in 0..min of its endpoint supplies, in
    lexicographic order. Every aggregate of characteristic vectors lies in
    this box."""
    supply = tuple(supply)
    if len(supply) != graph.n:
        raise ValueError(f"expected {graph.n} supply entries")
    if any(s < 0 for s in supply):
        raise ValueError("supply entries must be nonnegative")
    ranges = [range(min(supply[i], supply[j]) + 1) for i, j in graph.edges]
    for combo in itertools.product(*ranges):
        yield GPoint(graph, supply + combo)


def is_decomposable(a: GPoint, m: int, caps: Caps = DEFAULT_CAPS) -> bool:
    return next(enumerate_decompositions(a, m, caps), None) is not None


def seller_demand(
    p: PriceVector, supply: Sequence[int], m: int, caps: Caps = DEFAULT_CAPS
) -> frozenset[GPoint]:
    """Revenue-maximizing aggregates at a price: among all decomposable
    points projecting onto the supply, those maximizing <p, a>."""
    g = p.graph
    caps.check_n(g.n)
    caps.check_m(m)
    best: Optional[Fraction] = None
    best_points: list[GPoint] = []
    for a in candidate_points(g, supply):
        if not is_decomposable(a, m, caps):
            continue
        rev = p.dot(a)
        if best is None or rev > best:
            best, best_points = rev, [a]
        elif rev == best:
            best_points.append(a)
    if best is None:
        raise ValueError("no decomposable aggregate point projects onto the supply")
    return frozenset(best_points)


@dataclass(frozen=True)
class PEVerdict:
    ok: bool
    ce: CEVerdict
    revenue: Fraction
    seller_best_revenue: Fraction
    seller_optimal: bool


def verify_pe(
    vs: Sequence[Valuation],
    alloc: Allocation,
    p: PriceVector,
    supply: Sequence[int],
    caps: Caps = DEFAULT_CAPS,
) -> PEVerdict:
    """CE check plus the seller side: the sold aggregate must attain the
    maximal revenue among all decomposable points over the supply."""
    g = p.graph
    agg = aggregate(g, alloc)
    if project(agg) != tuple(supply):
        raise ValueError(
            f"allocation sells {project(agg)} but the supply is {tuple(supply)}"
        )
    ce = verify_ce(vs, alloc, p, caps)
    sd = seller_demand(p, supply, len(vs), caps)
    best = p.dot(next(iter(sd)))
    seller_ok = agg in sd
    return PEVerdict(ce.ok and seller_ok, ce, ce.revenue, best, seller_ok)


def walrasian_exists(
    vs: Sequence[Valuation], supply: Sequence[int], caps: Caps = DEFAULT_CAPS
) -> Optional[tuple[PriceVector, Allocation]]:
    """Search for a CE under linear pricing (edge prices pinned to zero).
    Returns a witness or None after exhausting every decomposable point
    over the supply."""
    from . import pricing  # deferred: pricing builds on this module

    res = pricing.optimal_ce(vs, supply, walrasian=True, caps=caps)
    if res.status != pricing.FOUND:
        return None
    return res.price, res.allocation
