"""Geometry of the bundle polytope P(G): the convex hull of all
characteristic vectors a_S.

P(K_n) is the correlation (boolean quadric) polytope; no full facet
description is known for n >= 4, so faces are always handled
extensionally through their vertex lists. The module provides the
classical linear-relaxation inequalities as an oracle, two constructive
decompositions of special integer points of the dilate m*P, exhaustive
decomposition enumeration, and exact Minkowski-sum membership tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .caps import DEFAULT_CAPS, Caps, CapExceededError
from .linprog import EQ, LinearProgram, OPTIMAL, lp_solve
from .model import Bundle, EMPTY_BUNDLE, GPoint, ValueGraph, char_vector

VERTEX_CAP = 16


@lru_cache(maxsize=None)
def _vertex_table(graph: ValueGraph) -> tuple[GPoint, ...]:
    return tuple(
        char_vector([i for i in range(graph.n) if mask >> i & 1], graph)
        for mask in range(1 << graph.n)
    )


def vertices_P(graph: ValueGraph, cap: int = VERTEX_CAP) -> list[GPoint]:
    """All 2^n characteristic vectors, ordered by subset bitmask. These are
    exactly the vertices and the lattice points of P(G)."""
    if graph.n > cap:
        raise CapExceededError(f"n={graph.n} exceeds vertex enumeration cap {cap}")
    return list(_vertex_table(graph))


@dataclass(frozen=True)
class PadbergViolation:
    tag: str  # one of "(i)".."(v)"
    indices: tuple[int, ...]
    value: int  # the violated left-hand side


def padberg_check(a: GPoint, m: int) -> list[PadbergViolation]:
    """Check the linear-relaxation inequalities of m*P(K_n).

    (i)  x_ij >= 0            (ii) x_i - x_ij >= 0
    (iii) x_i + x_j - x_ij <= m
    (iv) x_i + x_jk - x_ij - x_ik >= 0
    (v)  x_i + x_j + x_k - x_ij - x_ik - x_jk <= m
    over all vertex triples. Empty result iff all hold.
    """
    g = a.graph
    if not g.is_complete():
        raise ValueError("the inequality system is defined over complete graphs")
    out = []
    c = a.coords
    e = g.edge_coord
    for i, j in g.edges:
        if c[e(i, j)] < 0:
            out.append(PadbergViolation("(i)", (i, j), c[e(i, j)]))
        for k in (i, j):
            if c[k] - c[e(i, j)] < 0:
                out.append(PadbergViolation("(ii)", (k, i, j), c[k] - c[e(i, j)]))
        if c[i] + c[j] - c[e(i, j)] > m:
            out.append(PadbergViolation("(iii)", (i, j), c[i] + c[j] - c[e(i, j)]))
    for j, k in g.edges:
        for i in range(g.n):
            if i == j or i == k:
                continue
            lhs = c[i] + c[e(j, k)] - c[e(i, j)] - c[e(i, k)]
            if lhs < 0:
                out.append(PadbergViolation("(iv)", (i, j, k), lhs))
    for i in range(g.n):
        for j in range(i + 1, g.n):
            for k in range(j + 1, g.n):
                lhs = (
                    c[i] + c[j] + c[k]
                    - c[e(i, j)] - c[e(i, k)] - c[e(j, k)]
                )
                if lhs > m:
                    out.append(PadbergViolation("(v)", (i, j, k), lhs))
    return out


@dataclass(frozen=True)
class CliqueDecomposition:
    """a = sum of multiplicity * char_vector(clique) over the parts."""

    graph: ValueGraph
    parts: tuple[tuple[int, Bundle], ...]

    def point(self) -> GPoint:
        total = GPoint.zero(self.graph)
        for mult, clique in self.parts:
            total = total + char_vector(clique, self.graph).scale(mult)
        return total

    def expand(self) -> list[Bundle]:
        """One bundle per copy, multiplicities unrolled."""
        out: list[Bundle] = []
        for mult, clique in self.parts:
            out.extend([clique] * mult)
        return out


def clique_decompose(a: GPoint, r: int) -> CliqueDecomposition:
    """Split a point with entries in {0, r} into r copies each of pairwise
    disjoint cliques (the components of the 0/1 pattern a/r, which must all
    be complete)."""
    g = a.graph
    if not g.is_complete():
        raise ValueError("clique decomposition is defined over complete graphs")
    if r < 1:
        raise ValueError("multiplicity r must be positive")
    for k, c in enumerate(a.coords):
        if c not in (0, r):
            raise ValueError(f"coordinate {k} has value {c}, not in {{0, {r}}}")
    verts = {i for i in range(g.n) if a.coords[i] == r}
    pairs = {(i, j) for i, j in g.edges if a.coords[g.edge_coord(i, j)] == r}
    for i, j in pairs:
        if i not in verts or j not in verts:
            raise ValueError(
                f"edge ({i},{j}) is set but an endpoint is not: fails (ii)"
            )
    # Connected components of the pattern graph.
    comp: dict[int, int] = {}
    for i in sorted(verts):
        if i in comp:
            continue
        stack, comp[i] = [i], i
        while stack:
            u = stack.pop()
            for x, y in pairs:
                w = y if x == u else x if y == u else None
                if w is not None and w not in comp:
                    comp[w] = i
                    stack.append(w)
    groups: dict[int, set[int]] = {}
    for v, root in comp.items():
        groups.setdefault(root, set()).add(v)
    parts = []
    for root in sorted(groups):
        members = groups[root]
        for i in sorted(members):
            for j in sorted(members):
                if i < j and (i, j) not in pairs:
                    raise ValueError(
                        f"component {sorted(members)} is not a clique "
                        f"(missing edge ({i},{j})): fails (iv)"
                    )
        parts.append((r, frozenset(members)))
    return CliqueDecomposition(g, tuple(parts))


def nested_chain_point(
    bundle: Iterable[int], m: int, graph: ValueGraph
) -> tuple[GPoint, CliqueDecomposition]:
    """Lift a supply bundle to the point with edge entries min(b_i, b_j),
    together with its decomposition into a chain of nested cliques: level
    t contributes the clique {i : b_i >= t}. Pads with an empty part so the
    multiplicities sum to m."""
    if not graph.is_complete():
        raise ValueError("nested chain construction is defined over complete graphs")
    b = tuple(bundle)
    if len(b) != graph.n:
        raise ValueError(f"expected {graph.n} bundle entries, got {len(b)}")
    for i, x in enumerate(b):
        if not 0 <= x <= m:
            raise ValueError(f"bundle entry {x} at vertex {i} is outside [0, {m}]")
    coords = list(b)
    coords.extend(min(b[i], b[j]) for i, j in graph.edges)
    point = GPoint(graph, tuple(coords))
    levels = sorted({x for x in b if x > 0})
    parts = []
    prev = 0
    for t in levels:
        parts.append((t - prev, frozenset(i for i in range(graph.n) if b[i] >= t)))
        prev = t
    if m > prev:
        parts.append((m - prev, EMPTY_BUNDLE))
    return point, CliqueDecomposition(graph, tuple(parts))


def enumerate_decompositions(
    a: GPoint, m: int, caps: Caps = DEFAULT_CAPS
) -> Iterator[tuple[Bundle, ...]]:
    """Yield every multiset of m bundles whose characteristic vectors sum
    to a, each exactly once (bundles in decreasing bitmask order, empties
    last). Empty iterator iff a is not a sum of m lattice points of P(G).

    Depth-first search over bundles in canonical nonincreasing order, with
    coordinate-wise residual pruning.
    """
    g = a.graph
    caps.check_n(g.n)
    caps.check_m(m)
    if any(c < 0 for c in a.coords):
        raise ValueError("point must be nonnegative")
    table = _vertex_table(g)
    cands = [
        (mask, table[mask], frozenset(i for i in range(g.n) if mask >> i & 1))
        for mask in range((1 << g.n) - 1, 0, -1)
    ]
    epairs = [(i, j, g.edge_coord(i, j)) for i, j in g.edges]

    def feasible(res: tuple[int, ...], k: int) -> bool:
        if any(c > k for c in res):
            return False
        for i, j, eij in epairs:
            if res[eij] > min(res[i], res[j]) or res[eij] < res[i] + res[j] - k:
                return False
        return True

    def rec(start: int, k: int, res: tuple[int, ...], path: list[Bundle]):
        if not any(res):
            yield tuple(path) + (EMPTY_BUNDLE,) * k
            return
        if k == 0 or not feasible(res, k):
            return
        for idx in range(start, len(cands)):
            mask, ch, bundle = cands[idx]
            nxt = tuple(x - y for x, y in zip(res, ch.coords))
            if any(x < 0 for x in nxt):
                continue
            path.append(bundle)
            yield from rec(idx, k - 1, nxt, path)
            path.pop()

    return rec(0, m, a.coords, [])


@dataclass(frozen=True)
class Face:
    """A face of P(G), represented extensionally by its vertex set."""

    graph: ValueGraph
    vertices: tuple[GPoint, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a face needs at least one vertex")
        seen = set()
        for q in self.vertices:
            if q.graph != self.graph:
                raise ValueError("face vertex over a different graph")
            if not q.is_characteristic():
                raise ValueError(f"{q.coords} is not a characteristic vector")
            if q.coords in seen:
                raise ValueError("duplicate face vertex")
            seen.add(q.coords)

    @classmethod
    def from_bundles(cls, graph: ValueGraph, bundles: Iterable[Iterable[int]]) -> "Face":
        return cls(graph, tuple(char_vector(S, graph) for S in bundles))


def minkowski_contains(faces: list[Face], a: GPoint) -> bool:
    """Exact test for a in F^1 + ... + F^m: feasibility of convex weights
    per face whose weighted vertex sum hits a."""
    g = a.graph
    if any(f.graph != g for f in faces):
        raise ValueError("faces and point must share one graph")
    nvars = sum(len(f.vertices) for f in faces)
    zero, one = Fraction(0), Fraction(1)
    rows = []
    offset = 0
    for f in faces:
        coeffs = [zero] * nvars
        for k in range(len(f.vertices)):
            coeffs[offset + k] = one
        rows.append((tuple(coeffs), EQ, one))
        offset += len(f.vertices)
    for c in range(g.d):
        coeffs = [zero] * nvars
        offset = 0
        for f in faces:
            for k, q in enumerate(f.vertices):
                if q.coords[c]:
                    coeffs[offset + k] = Fraction(q.coords[c])
            offset += len(f.vertices)
        rows.append((tuple(coeffs), EQ, Fraction(a.coords[c])))
    lp = LinearProgram((zero,) * nvars, tuple(rows), nonneg=(True,) * nvars)
    return lp_solve(lp).status == OPTIMAL


def vertex_sum_contains(
    faces: list[Face], a: GPoint, cap: int = 10**8
) -> Optional[tuple[GPoint, ...]]:
    """Search for one vertex per face summing to a; None if impossible.
    Depth-first with residual pruning; deterministic in face/vertex order."""
    g = a.graph
    if any(f.graph != g for f in faces):
        raise ValueError("faces and point must share one graph")
    size = 1
    for f in faces:
        size *= len(f.vertices)
        if size > cap:
            raise CapExceededError(f"face vertex product exceeds cap {cap}")

    mfaces = len(faces)

    def rec(idx: int, res: tuple[int, ...], picked: list[GPoint]):
        if idx == mfaces:
            return list(picked) if not any(res) else None
        if any(c > mfaces - idx for c in res):
            return None
        for q in faces[idx].vertices:
            nxt = tuple(x - y for x, y in zip(res, q.coords))
            if any(x < 0 for x in nxt):
                continue
            picked.append(q)
            found = rec(idx + 1, nxt, picked)
            if found is not None:
                return found
            picked.pop()
        return None

    found = rec(0, a.coords, [])
    return tuple(found) if found is not None else None
