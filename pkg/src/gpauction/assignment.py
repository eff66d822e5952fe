"""Integral assignment of target vectors to faces via max flow.

Given faces with convex weights on their vertices and a target multiset
of characteristic vectors with multiplicities, the weights induce a
fractional flow of value m in a three-layer network (source, faces,
targets, sink). Integrality of max flow then yields a labeling that
hands each face one of its own vertices, using each target exactly its
multiplicity many times.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import GPoint
from .polytope import Face


class BalanceError(ValueError):
    """The fractional-flow preconditions do not hold."""


@dataclass
class FlowNetwork:
    """Directed network with integer capacities; node 0 is the source and
    node count-1 the sink. Arcs keep insertion order, which fixes the
    augmenting order and hence the maximum flow chosen."""

    num_nodes: int
    arcs: list[tuple[int, int, int]] = field(default_factory=list)  # (u, v, cap)
    flows: list[int] = field(default_factory=list)

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.num_nodes - 1

    def add_arc(self, u: int, v: int, cap: int) -> int:
        if cap < 0:
            raise ValueError("capacity must be nonnegative")
        self.arcs.append((u, v, cap))
        self.flows.append(0)
        return len(self.arcs) - 1


def max_flow_integral(net: FlowNetwork) -> int:
    """Edmonds-Karp with breadth-first shortest augmenting paths. All
    capacities are integers, so every augmentation is by a positive
    integer and the resulting flow is integral."""
    # Residual adjacency: per arc a forward slot and a backward slot.
    adj: list[list[int]] = [[] for _ in range(net.num_nodes)]
    cap: list[int] = []
    to: list[int] = []
    for u, v, c in net.arcs:
        adj[u].append(len(cap))
        to.append(v)
        cap.append(c)
        adj[v].append(len(cap))
        to.append(u)
        cap.append(0)
    total = 0
    while True:
        parent_arc = [-1] * net.num_nodes
        parent_arc[net.source] = -2
        queue = [net.source]
        while queue and parent_arc[net.sink] == -1:
            nxt = []
            for u in queue:
                for k in adj[u]:
                    w = to[k]
                    if parent_arc[w] == -1 and cap[k] > 0:
                        parent_arc[w] = k
                        nxt.append(w)
            queue = nxt
        if parent_arc[net.sink] == -1:
            break
        bottleneck = None
        w = net.sink
        while w != net.source:
            k = parent_arc[w]
            bottleneck = cap[k] if bottleneck is None else min(bottleneck, cap[k])
            w = to[k ^ 1]
        w = net.sink
        while w != net.source:
            k = parent_arc[w]
            cap[k] -= bottleneck
            cap[k ^ 1] += bottleneck
            w = to[k ^ 1]
        total += bottleneck
    for i, (_, _, c) in enumerate(net.arcs):
        net.flows[i] = c - cap[2 * i]
    return total


def label_faces(
    faces: Sequence[tuple[Face, dict[GPoint, Fraction]]],
    targets: Sequence[tuple[GPoint, int]],
) -> list[GPoint]:
    """Assign one target vector to each face so that the vector is a vertex
    of the face and each target is used exactly its multiplicity many
    times.

    ``faces[b]`` pairs a face with positive convex weights on (some of)
    its vertices; ``targets`` lists the distinct vectors with
    multiplicities summing to len(faces). Preconditions: per-face weights
    sum to one and, for every target t, the weights placed on t across all
    faces sum to its multiplicity (the balance condition). These make the
    weights a fractional flow of full value, so an integral one exists.
    """
    m = len(faces)
    mults = [mu for _, mu in targets]
    if sum(mults) != m:
        raise BalanceError(f"multiplicities sum to {sum(mults)}, need m={m}")
    if any(mu <= 0 for mu in mults):
        raise BalanceError("multiplicities must be positive")
    index_of = {t.coords: k for k, (t, _) in enumerate(targets)}
    if len(index_of) != len(targets):
        raise BalanceError("duplicate target vector")

    # lam[b][k]: total weight face b places on target k.
    lam: list[list[Fraction]] = [[Fraction(0)] * len(targets) for _ in range(m)]
    for b, (face, weights) in enumerate(faces):
        total = Fraction(0)
        face_coords = {q.coords for q in face.vertices}
        for q, w in weights.items():
            if w <= 0:
                raise BalanceError(f"face {b}: weight on {q.coords} must be positive")
            if q.coords not in face_coords:
                raise BalanceError(f"face {b}: {q.coords} is not one of its vertices")
            k = index_of.get(q.coords)
            if k is None:
                raise BalanceError(f"face {b}: weighted vertex {q.coords} is not a target")
            lam[b][k] += w
            total += w
        if total != 1:
            raise BalanceError(f"face {b}: weights sum to {total}, not 1")
    for k, (t, mu) in enumerate(targets):
        got = sum(lam[b][k] for b in range(m))
        if got != mu:
            raise BalanceError(
                f"target {t.coords}: weights sum to {got}, need multiplicity {mu}"
            )

    # Nodes: source, faces 1..m, targets m+1..m+s, sink.
    s = len(targets)
    net = FlowNetwork(m + s + 2)
    sink = net.sink
    for b in range(m):
        net.add_arc(net.source, 1 + b, 1)
    mid_arcs: dict[tuple[int, int], int] = {}
    for b in range(m):
        for k in range(s):
            if lam[b][k] > 0:
                mid_arcs[(b, k)] = net.add_arc(1 + b, 1 + m + k, 1)
    for k in range(s):
        net.add_arc(1 + m + k, sink, mults[k])

    flow = max_flow_integral(net)
    if flow != m:  # cannot happen when the balance preconditions hold
        raise RuntimeError(f"integral flow has value {flow} < {m}")
    labeling: list[Optional[GPoint]] = [None] * m
    for (b, k), arc in mid_arcs.items():
        if net.flows[arc] == 1:
            labeling[b] = targets[k][0]
    assert all(q is not None for q in labeling)
    return labeling  # type: ignore[return-value]
