"""Brute-force optimal-CE oracle, independent of the production search.

Enumerates every ordered allocation (bundle per agent) whose aggregate
projects onto the supply, decides CE-supportability of each by solving
the full constraint system (one row per agent and bundle), and maximizes
the revenue objective over the supportable ones.
"""
import itertools
from typing import Optional, Sequence

from gpauction.linprog import OPTIMAL, lp_solve
from gpauction.model import Valuation, aggregate, project
from gpauction.pricing import build_ce_lp


def oracle_optimal_revenue(
    vs: Sequence[Valuation], supply: Sequence[int], walrasian: bool = False
) -> Optional:
    g = vs[0].graph
    m = len(vs)
    bundles = [
        frozenset(i for i in range(g.n) if mask >> i & 1)
        for mask in range(1 << g.n)
    ]
    best = None
    for alloc in itertools.product(bundles, repeat=m):
        agg = aggregate(g, alloc)
        if project(agg) != tuple(supply):
            continue
        res = lp_solve(build_ce_lp(vs, alloc, agg, walrasian))
        if res.status != OPTIMAL:
            continue
        if best is None or res.value > best:
            best = res.value
    return best
