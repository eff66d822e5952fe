"""Construction of competitive-equilibrium prices.

At a fixed aggregate point the CE prices form a polyhedron: for each
agent, the assigned bundle must beat every other bundle at the quadratic
price. Only welfare-maximal splits of the point can be supported (summing
the per-agent optimality conditions shows any supported split maximizes
total value, and conversely a price supporting one welfare-maximal split
supports them all), so one LP per point suffices: maximize revenue
<p, a> over that polyhedron. The LP is solved exactly, generating the
exponentially many bundle constraints lazily and verifying the optimum
against a full demand-set scan.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .caps import DEFAULT_CAPS, Caps
from .demand import candidate_points, max_welfare, verify_ce
from .linprog import EQ, GE, INFEASIBLE, LE, LinearProgram, OPTIMAL, lp_solve
from .model import (
    Allocation,
    Bundle,
    GPoint,
    PriceVector,
    Valuation,
    char_vector,
    is_finite,
    value,
)
from .polytope import vertices_P

FOUND = "found"
INFEASIBLE_AT_POINT = "infeasible-at-point"
NO_POINT_FOUND = "no-point-found"

_MAX_M_DOUBLINGS = 64


class CoveringError(ValueError):
    """The valuations do not form covering clique bids."""


@dataclass(frozen=True)
class CEResult:
    status: str
    point: Optional[GPoint] = None
    allocation: Optional[Allocation] = None
    price: Optional[PriceVector] = None
    revenue: Optional[Fraction] = None


def big_M(vs: Sequence[Valuation]) -> Fraction:
    """Finite stand-in for minus infinity: 1 + (d+1) * (1 + max finite |w|).
    Callers re-solve with a doubled M while any demanded bundle still
    touches a substituted entry."""
    finite = [abs(w) for v in vs for w in v.weights if is_finite(w)]
    if not finite:
        raise ValueError("need at least one finite weight")
    d = vs[0].graph.d
    return 1 + (d + 1) * (1 + max(finite))


def substitute_neg_inf(v: Valuation, M: Fraction) -> Valuation:
    return Valuation(v.graph, tuple(w if is_finite(w) else -M for w in v.weights))


def build_ce_lp(
    vs: Sequence[Valuation],
    alloc: Allocation,
    point: GPoint,
    walrasian: bool = False,
) -> LinearProgram:
    """The full revenue-maximization LP at a point: variables are the d
    price coordinates; for every agent and every bundle T of finite value,
    <p, a_T - a_b> >= v_b(T) - v_b(S_b). Walrasian mode pins the edge
    coordinates to zero."""
    g = point.graph
    verts = vertices_P(g)
    rows = []
    for b, S in enumerate(alloc):
        ab = char_vector(S, g)
        vb = value(vs[b], S)
        if not is_finite(vb):
            raise ValueError(f"agent {b} is assigned a bundle of value -inf")
        for q in verts:
            if q.coords == ab.coords:
                continue
            vq = value(vs[b], q.as_bundle())
            if not is_finite(vq):
                continue  # never competes: dominated by the empty bundle
            coeffs = tuple(Fraction(x - y) for x, y in zip(q.coords, ab.coords))
            rows.append((coeffs, GE, vq - vb))
    fixings = (
        {g.n + k: Fraction(0) for k in range(len(g.edges))} if walrasian else None
    )
    objective = tuple(Fraction(c) for c in point.coords)
    return LinearProgram(objective, tuple(rows), fixings=fixings)


def _solve_ce_lp_lazy(
    vs: Sequence[Valuation],
    alloc: Allocation,
    point: GPoint,
    walrasian: bool,
    strict_masks: Optional[Sequence[frozenset[int]]] = None,
    revenue_pin: Optional[Fraction] = None,
) -> Optional[tuple[PriceVector, Fraction, Optional[Fraction]]]:
    """Row generation for the LP of build_ce_lp: solve with a small active
    set, scan all bundles exactly for violated demand constraints, repeat.
    The returned price satisfies every constraint and attains the full
    LP's optimum; None certifies infeasibility (a relaxation already is).

    With ``strict_masks`` (one bundle-mask set per agent) the objective
    switches to the margin game: pin the revenue to ``revenue_pin`` and
    maximize t (capped at 1) such that each agent's assignment beats each
    listed bundle by at least t. Bundles of value -inf never enter rows:
    the empty bundle dominates them under the true valuations.
    """
    g = point.graph
    n, d = g.n, g.d
    verts = vertices_P(g)
    bundles = [q.as_bundle() for q in verts]
    m = len(alloc)
    part_chars = [char_vector(S, g) for S in alloc]
    part_vals = [value(vs[b], alloc[b]) for b in range(m)]
    vals = [[value(vs[b], T) for T in bundles] for b in range(m)]
    strict = strict_masks is not None  # adds the margin variable t at index d
    zero = Fraction(0)

    if strict:
        objective = (zero,) * d + (Fraction(1),)
    else:
        objective = tuple(Fraction(c) for c in point.coords)
    fixings = (
        {g.n + k: zero for k in range(len(g.edges))} if walrasian else None
    )

    def mask_of(S: Bundle) -> int:
        return sum(1 << i for i in S)

    active: list[set[int]] = []
    for b in range(m):
        seed = {0} | {1 << i for i in range(n)} | {mask_of(S) for S in alloc}
        seed.discard(mask_of(alloc[b]))
        active.append(seed)

    base_rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = []
    if strict:
        tcap = (zero,) * d + (Fraction(1),)
        base_rows.append((tcap, LE, Fraction(1)))
        pin = tuple(Fraction(c) for c in point.coords) + (zero,)
        base_rows.append((pin, EQ, revenue_pin))

    while True:
        rows = list(base_rows)
        for b in range(m):
            ab = part_chars[b]
            for mask in sorted(active[b]):
                vq = vals[b][mask]
                if not is_finite(vq):
                    continue
                coeffs = [Fraction(x - y) for x, y in zip(verts[mask].coords, ab.coords)]
                if strict:
                    coeffs.append(
                        Fraction(-1) if mask in strict_masks[b] else zero
                    )
                rows.append((tuple(coeffs), GE, vq - part_vals[b]))
        res = lp_solve(LinearProgram(objective, tuple(rows), fixings=fixings))
        if res.status == INFEASIBLE:
            return None
        assert res.status == OPTIMAL, "the objective is bounded"
        p = res.x[:d]
        t = res.x[d] if strict else zero
        clean = True
        for b in range(m):
            ab = part_chars[b]
            own = part_vals[b] - sum(pk * ck for pk, ck in zip(p, ab.coords) if ck)
            new = set()
            for mask in range(1 << n):
                if mask in active[b]:
                    continue
                vq = vals[b][mask]
                if not is_finite(vq):
                    continue
                u = vq - sum(
                    pk * ck for pk, ck in zip(p, verts[mask].coords) if ck
                )
                margin = t if strict and mask in strict_masks[b] else zero
                if u > own - margin:
                    new.add(mask)
            if new:
                clean = False
                active[b].update(new)
        if clean:
            price = PriceVector(g, tuple(p), linear_only=walrasian)
            revenue = revenue_pin if strict else res.value
            return price, revenue, (res.value if strict else None)


def ce_price_at_point(
    vs: Sequence[Valuation],
    point: GPoint,
    *,
    walrasian: bool = False,
    caps: Caps = DEFAULT_CAPS,
) -> CEResult:
    """Best competitive equilibrium selling exactly the aggregate `point`:
    maximal revenue over all CE-supporting prices, with a welfare-maximal
    allocation as witness. Requires finite weights; covering bids with
    -inf entries go through ce_for_covering."""
    g = point.graph
    m = len(vs)
    caps.check_n(g.n)
    caps.check_m(m)
    if any(v.graph != g for v in vs):
        raise ValueError("valuations and point over different graphs")
    if not all(v.is_finite() for v in vs):
        raise ValueError(
            "weights must be finite here; use ce_for_covering for clique bids"
        )
    welfare, alloc = max_welfare(vs, point, caps)
    if alloc is None:
        return CEResult(INFEASIBLE_AT_POINT, point=point)
    sol = _solve_ce_lp_lazy(vs, alloc, point, walrasian)
    if sol is None:
        return CEResult(INFEASIBLE_AT_POINT, point=point)
    price, revenue, _ = sol
    result = CEResult(FOUND, point, alloc, price, revenue)
    assert verify_ce(vs, alloc, price, caps).ok
    return result


def optimal_ce(
    vs: Sequence[Valuation],
    supply: Sequence[int],
    *,
    walrasian: bool = False,
    caps: Caps = DEFAULT_CAPS,
    jobs: Optional[int] = None,
) -> CEResult:
    """Revenue-maximal CE over every decomposable point projecting onto
    the supply. Ties go to the lexicographically smallest point (and the
    witness allocation is the lexicographically least welfare-maximal
    one). ``jobs`` evaluates candidate points concurrently; the reduction
    is order-deterministic, so results never depend on it."""
    if not vs:
        raise ValueError("need at least one valuation")
    m = len(vs)
    g = vs[0].graph
    caps.check_n(g.n)
    caps.check_m(m)
    supply = tuple(supply)
    if len(supply) != g.n:
        raise ValueError(f"expected {g.n} supply entries")
    if any(not 0 <= s <= m for s in supply):
        raise ValueError("supply entries must lie in 0..m")

    def at_point(a: GPoint) -> CEResult:
        return ce_price_at_point(vs, a, walrasian=walrasian, caps=caps)

    points = list(candidate_points(g, supply))
    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(at_point, points))
    else:
        results = map(at_point, points)

    best: Optional[CEResult] = None
    for res in results:
        if res.status != FOUND:
            continue
        if best is None or res.revenue > best.revenue:
            best = res
    if best is None:
        if g.is_complete() and not walrasian:
            raise AssertionError(
                "no CE point over a complete graph: contradicts the nested-chain guarantee"
            )
        return CEResult(NO_POINT_FOUND)
    return best


def check_covering(vs: Sequence[Valuation]) -> list[Bundle]:
    """Validate clique bids jointly covering all item types; returns the
    per-agent supports."""
    g = vs[0].graph
    supports = []
    for b, v in enumerate(vs):
        sup = v.support
        for i, j in g.edges:
            if i in sup and j in sup:
                if not is_finite(v.weights[g.edge_coord(i, j)]):
                    raise CoveringError(
                        f"agent {b}: edge ({i},{j}) inside the support has weight -inf"
                    )
        supports.append(sup)
    uncovered = set(range(g.n)) - set().union(*supports)
    if uncovered:
        raise CoveringError(f"vertices {sorted(uncovered)} are in no agent's support")
    return supports


def is_compatible(a: GPoint, supports: Sequence[Bundle]) -> bool:
    g = a.graph
    return all(
        any(i in sup and j in sup for sup in supports)
        for i, j in g.edges
        if a.coords[g.edge_coord(i, j)] > 0
    )


def ce_for_covering(
    vs: Sequence[Valuation],
    supply: Sequence[int],
    a: GPoint,
    *,
    caps: Caps = DEFAULT_CAPS,
) -> CEResult:
    """CE construction for covering clique bids at a compatible point.

    Follows the substitution mechanism: replace -inf by -M, price at the
    point, and double M until no demanded bundle touches a substituted
    entry. Among the revenue-optimal prices of each substituted solve, a
    second stage picks one maximizing the margin by which out-of-support
    bundles lose, so the escalation stops as soon as M is large enough.
    Points at which no split avoids the -inf entries, or whose exact
    support-restricted price system is infeasible, are certified
    infeasible-at-point.
    """
    g = a.graph
    m = len(vs)
    caps.check_n(g.n)
    caps.check_m(m)
    supports = check_covering(vs)
    supply = tuple(supply)
    if a.coords[: g.n] != supply:
        raise ValueError(f"point projects to {a.coords[:g.n]}, not the supply {supply}")
    levels = {s for s in supply if s != 0}
    if len(levels) > 1:
        raise ValueError(f"supply must lie in {{0, r}}^n, got levels {sorted(levels)}")
    if not is_compatible(a, supports):
        raise ValueError(
            "point has a positive edge coordinate outside every agent's support"
        )

    welfare, alloc = max_welfare(vs, a, caps)
    if alloc is None or not is_finite(welfare):
        return CEResult(INFEASIBLE_AT_POINT, point=a)
    # Exact feasibility of the support-restricted system (the M -> infinity
    # limit): if even this fails, no price works for the true valuations.
    if _solve_ce_lp_lazy(vs, alloc, a, walrasian=False) is None:
        return CEResult(INFEASIBLE_AT_POINT, point=a)

    strays = [
        frozenset(
            mask
            for mask in range(1 << g.n)
            if not is_finite(
                value(vs[b], frozenset(i for i in range(g.n) if mask >> i & 1))
            )
        )
        for b in range(m)
    ]
    M = big_M(vs)
    for _ in range(_MAX_M_DOUBLINGS):
        tilde = [substitute_neg_inf(v, M) for v in vs]
        sol = _solve_ce_lp_lazy(tilde, alloc, a, walrasian=False)
        if sol is not None:
            price, revenue, _ = sol
            if any(strays[b] for b in range(m)):
                sol = _solve_ce_lp_lazy(
                    tilde, alloc, a, walrasian=False,
                    strict_masks=strays, revenue_pin=revenue,
                )
                assert sol is not None  # the stage-1 optimum stays feasible
                price, revenue, margin = sol
                demanded_ok = margin > 0
            else:
                demanded_ok = True
            if demanded_ok:
                res = CEResult(FOUND, a, alloc, price, revenue)
                assert verify_ce(vs, alloc, price, caps).ok
                return res
        M *= 2
    raise AssertionError(
        "covering CE not reached by M escalation despite exact feasibility"
    )
