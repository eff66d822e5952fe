"""Core domain types for multi-unit combinatorial auctions with quadratic
valuations and anonymous quadratic (vertex + edge) pricing.

Vectors live in Q^d over a value graph on n vertices with d = n + |E|:
coordinates 0..n-1 are indexed by vertices, the rest by edges in
lexicographic order. All arithmetic is exact; weights are `Fraction`
with ``NEG_INF`` as the single non-finite value, so equilibrium checks
are plain equality tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

NEG_INF = float("-inf")

Weight = Union[Fraction, float]  # float only ever holds NEG_INF
Bundle = frozenset[int]
Allocation = tuple[Bundle, ...]

EMPTY_BUNDLE: Bundle = frozenset()


def as_fraction(x: Union[int, str, Fraction]) -> Fraction:
    """Exact rational from an int, a Fraction, or a string like "-1/2"."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}; use int, str or Fraction")
    return Fraction(x)


def as_weight(x) -> Weight:
    """Like :func:`as_fraction` but also accepting the symbol ``-inf``."""
    if x == NEG_INF:
        return NEG_INF
    return as_fraction(x)


def is_finite(w: Weight) -> bool:
    return w is not NEG_INF and w != NEG_INF


@dataclass(frozen=True)
class ValueGraph:
    """Graph on vertices 0..n-1 fixing the coordinate order of all vectors.

    Vertex i owns coordinate i; edge (i, j) with i < j owns coordinate
    n + (lexicographic rank of (i, j)).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    _edge_coord: dict[tuple[int, int], int] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for e in self.edges:
            i, j = e
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge {e}: need 0 <= i < j < n")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        ordered = tuple(sorted(self.edges))
        object.__setattr__(self, "edges", ordered)
        object.__setattr__(
            self, "_edge_coord", {e: self.n + k for k, e in enumerate(ordered)}
        )

    @classmethod
    def complete(cls, n: int) -> "ValueGraph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "ValueGraph":
        return cls(n, tuple(tuple(sorted(e)) for e in edges))

    @property
    def d(self) -> int:
        return self.n + len(self.edges)

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_coord

    def edge_coord(self, i: int, j: int) -> int:
        return self._edge_coord[(min(i, j), max(i, j))]

    def coord_labels(self) -> list[str]:
        """Human-readable 1-based labels, one per coordinate."""
        return [str(i + 1) for i in range(self.n)] + [
            f"{i + 1}-{j + 1}" for i, j in self.edges
        ]


@dataclass(frozen=True)
class GPoint:
    """Integer vector indexed by the vertices then edges of a graph."""

    graph: ValueGraph
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.graph.d:
            raise ValueError(
                f"expected {self.graph.d} coordinates, got {len(self.coords)}"
            )
        if not all(isinstance(c, int) for c in self.coords):
            raise ValueError("coordinates must be integers")

    @classmethod
    def zero(cls, graph: ValueGraph) -> "GPoint":
        return cls(graph, (0,) * graph.d)

    def vertex(self, i: int) -> int:
        return self.coords[i]

    def edge(self, i: int, j: int) -> int:
        return self.coords[self.graph.edge_coord(i, j)]

    def _require_same_graph(self, other: "GPoint") -> None:
        if self.graph != other.graph:
            raise ValueError("points live over different graphs")

    def __add__(self, other: "GPoint") -> "GPoint":
        self._require_same_graph(other)
        return GPoint(self.graph, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GPoint") -> "GPoint":
        self._require_same_graph(other)
        return GPoint(self.graph, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k: int) -> "GPoint":
        return GPoint(self.graph, tuple(k * c for c in self.coords))

    def is_characteristic(self) -> bool:
        """True iff this is a_S for some bundle S: 0/1 coords with each edge
        coordinate equal to the product of its endpoint coordinates."""
        if any(c not in (0, 1) for c in self.coords):
            return False
        return all(
            self.coords[self.graph.edge_coord(i, j)] == self.coords[i] * self.coords[j]
            for i, j in self.graph.edges
        )

    def as_bundle(self) -> Bundle:
        if not self.is_characteristic():
            raise ValueError("not a characteristic vector")
        return frozenset(i for i in range(self.graph.n) if self.coords[i] == 1)


def char_vector(S: Iterable[int], graph: ValueGraph) -> GPoint:
    """Characteristic vector a_S: vertex indicators of S plus indicators of
    the edges internal to S."""
    bundle = frozenset(S)
    for i in bundle:
        if not 0 <= i < graph.n:
            raise ValueError(f"bundle element {i} out of range [0, {graph.n})")
    coords = [1 if i in bundle else 0 for i in range(graph.n)]
    coords.extend(
        1 if (i in bundle and j in bundle) else 0 for i, j in graph.edges
    )
    return GPoint(graph, tuple(coords))


def project(a: GPoint) -> tuple[int, ...]:
    """Forget the edge coordinates, keeping the n vertex coordinates."""
    return a.coords[: a.graph.n]


def aggregate(graph: ValueGraph, alloc: Allocation) -> GPoint:
    """Sum of the characteristic vectors of an allocation's bundles."""
    total = GPoint.zero(graph)
    for S in alloc:
        total = total + char_vector(S, graph)
    return total


@dataclass(frozen=True)
class Valuation:
    """Quadratic valuation given by a weight per vertex and per edge.

    A weight of NEG_INF marks items the agent will never accept; any bundle
    touching such a weight has value NEG_INF.
    """

    graph: ValueGraph
    weights: tuple[Weight, ...]

    def __post_init__(self):
        if len(self.weights) != self.graph.d:
            raise ValueError(
                f"expected {self.graph.d} weights, got {len(self.weights)}"
            )
        norm = tuple(as_weight(w) for w in self.weights)
        object.__setattr__(self, "weights", norm)

    @classmethod
    def zero(cls, graph: ValueGraph) -> "Valuation":
        return cls(graph, (Fraction(0),) * graph.d)

    @property
    def support(self) -> Bundle:
        """Vertices with finite weight."""
        return frozenset(i for i in range(self.graph.n) if is_finite(self.weights[i]))

    def is_finite(self) -> bool:
        return all(is_finite(w) for w in self.weights)


def value(v: Valuation, S: Iterable[int]) -> Weight:
    """Bundle value: sum of vertex weights over S plus edge weights internal
    to S; NEG_INF as soon as any touched weight is NEG_INF."""
    bundle = frozenset(S)
    total = Fraction(0)
    for i in bundle:
        w = v.weights[i]
        if not is_finite(w):
            return NEG_INF
        total += w
    for i, j in v.graph.edges:
        if i in bundle and j in bundle:
            w = v.weights[v.graph.edge_coord(i, j)]
            if not is_finite(w):
                return NEG_INF
            total += w
    return total


def shift(v: Valuation, c: Sequence[Union[Fraction, int, str]]) -> Valuation:
    """Add a finite vector to the weights entrywise; NEG_INF entries stay."""
    if len(c) != v.graph.d:
        raise ValueError(f"expected {v.graph.d} entries, got {len(c)}")
    delta = [as_fraction(x) for x in c]
    return Valuation(
        v.graph,
        tuple(
            w + delta[k] if is_finite(w) else NEG_INF
            for k, w in enumerate(v.weights)
        ),
    )


@dataclass(frozen=True)
class PriceVector:
    """Anonymous quadratic price vector; ``linear_only`` pins all edge
    entries to zero (classical per-item pricing)."""

    graph: ValueGraph
    entries: tuple[Fraction, ...]
    linear_only: bool = False

    def __post_init__(self):
        if len(self.entries) != self.graph.d:
            raise ValueError(
                f"expected {self.graph.d} entries, got {len(self.entries)}"
            )
        norm = tuple(as_fraction(x) for x in self.entries)
        object.__setattr__(self, "entries", norm)
        if self.linear_only and any(norm[self.graph.n :]):
            raise ValueError("linear_only price has nonzero edge entries")

    @classmethod
    def zero(cls, graph: ValueGraph, linear_only: bool = False) -> "PriceVector":
        return cls(graph, (Fraction(0),) * graph.d, linear_only)

    def dot(self, a: GPoint) -> Fraction:
        return sum(
            (p * c for p, c in zip(self.entries, a.coords) if c), Fraction(0)
        )

    def of_bundle(self, S: Iterable[int]) -> Fraction:
        return self.dot(char_vector(S, self.graph))
