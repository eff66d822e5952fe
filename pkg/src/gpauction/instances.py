"""Instance file parsing, printing, and the built-in example corpus.

JSON is the single on-disk format. Weights and prices travel as exact
rational strings ("3", "-1/2") or the literal "-inf"; vertices are
1-based in files and 0-based in memory; edge keys are "i-j" with i < j
in 1-based numbering.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from .model import (
    Allocation,
    Bundle,
    GPoint,
    NEG_INF,
    PriceVector,
    Valuation,
    ValueGraph,
    is_finite,
)
from .polytope import Face


class ParseError(ValueError):
    """Malformed instance or allocation file; message names the field."""


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{where}: {x!r} is not an exact rational")
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: cannot parse rational {x!r}") from exc


def _weight(x: Any, where: str):
    if x == "-inf":
        return NEG_INF
    return _rational(x, where)


def _weight_str(w) -> str:
    return "-inf" if not is_finite(w) else str(w)


def _edge_key(e: tuple[int, int]) -> str:
    return f"{e[0] + 1}-{e[1] + 1}"


def _parse_edge_key(key: str, n: int, where: str) -> tuple[int, int]:
    try:
        i_s, j_s = key.split("-")
        i, j = int(i_s) - 1, int(j_s) - 1
    except ValueError as exc:
        raise ParseError(f"{where}: bad edge key {key!r}, expected 'i-j'") from exc
    if not (0 <= i < j < n):
        raise ParseError(f"{where}: edge {key!r} out of range for n={n}")
    return (i, j)


@dataclass(frozen=True)
class InstanceFile:
    """One auction (or geometry) instance: graph, agents, supply, optional
    mode flags and optional face/point data for the polytope oracles."""

    graph: ValueGraph
    valuations: tuple[Valuation, ...]
    supply: tuple[int, ...]
    m: int
    walrasian: bool = False
    covering: bool = False
    faces: Optional[tuple[Face, ...]] = None
    point: Optional[GPoint] = None
    name: Optional[str] = None


def parse_instance(doc: dict) -> InstanceFile:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("field 'n': missing or not an integer")
    if n < 1:
        raise ParseError("field 'n': must be at least 1")
    if "edges" in doc:
        edges = tuple(
            _parse_edge_key(k, n, "field 'edges'") for k in doc["edges"]
        )
        try:
            graph = ValueGraph(n, edges)
        except ValueError as exc:
            raise ParseError(f"field 'edges': {exc}") from exc
    else:
        graph = ValueGraph.complete(n)

    vals = []
    for b, agent in enumerate(doc.get("agents", [])):
        where = f"agents[{b}]"
        vw = agent.get("vertex_weights")
        if not isinstance(vw, list) or len(vw) != n:
            raise ParseError(f"{where}.vertex_weights: need a list of {n} entries")
        weights = [_weight(x, f"{where}.vertex_weights[{i}]") for i, x in enumerate(vw)]
        ew = agent.get("edge_weights", {})
        by_edge = {
            _parse_edge_key(k, n, f"{where}.edge_weights"): _weight(
                x, f"{where}.edge_weights[{k}]"
            )
            for k, x in ew.items()
        }
        for e in by_edge:
            if not graph.has_edge(*e):
                raise ParseError(
                    f"{where}.edge_weights: {_edge_key(e)} is not an edge of the graph"
                )
        weights.extend(by_edge.get(e, Fraction(0)) for e in graph.edges)
        vals.append(Valuation(graph, tuple(weights)))

    supply_raw = doc.get("supply")
    if not isinstance(supply_raw, list) or len(supply_raw) != n:
        raise ParseError(f"field 'supply': need a list of {n} integers")
    supply = []
    for i, s in enumerate(supply_raw):
        if not isinstance(s, int) or isinstance(s, bool) or s < 0:
            raise ParseError(f"supply[{i}]: need a nonnegative integer")
        supply.append(s)

    m = doc.get("m", len(vals))
    if not isinstance(m, int) or m < len(vals) or (m < 1 and any(supply)):
        raise ParseError("field 'm': inconsistent agent count")
    if any(s > m for s in supply):
        raise ParseError(f"supply exceeds the agent count m={m}")

    mode = doc.get("mode", {})
    if not isinstance(mode, dict):
        raise ParseError("field 'mode': must be an object")

    faces = None
    if "faces" in doc:
        parsed = []
        for k, bundles in enumerate(doc["faces"]):
            where = f"faces[{k}]"
            try:
                parsed.append(
                    Face.from_bundles(
                        graph, [[int(i) - 1 for i in S] for S in bundles]
                    )
                )
            except (ValueError, TypeError) as exc:
                raise ParseError(f"{where}: {exc}") from exc
        faces = tuple(parsed)

    point = None
    if "point" in doc:
        coords = doc["point"]
        if (
            not isinstance(coords, list)
            or len(coords) != graph.d
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in coords)
        ):
            raise ParseError(f"field 'point': need a list of {graph.d} integers")
        point = GPoint(graph, tuple(coords))

    return InstanceFile(
        graph=graph,
        valuations=tuple(vals),
        supply=tuple(supply),
        m=m,
        walrasian=bool(mode.get("walrasian", False)),
        covering=bool(mode.get("covering", False)),
        faces=faces,
        point=point,
        name=doc.get("name"),
    )


def print_instance(inst: InstanceFile) -> dict:
    g = inst.graph
    doc: dict[str, Any] = {}
    if inst.name:
        doc["name"] = inst.name
    doc["n"] = g.n
    if not g.is_complete():
        doc["edges"] = [_edge_key(e) for e in g.edges]
    doc["agents"] = [
        {
            "vertex_weights": [_weight_str(w) for w in v.weights[: g.n]],
            "edge_weights": {
                _edge_key(e): _weight_str(v.weights[g.n + k])
                for k, e in enumerate(g.edges)
                if v.weights[g.n + k] != 0
            },
        }
        for v in inst.valuations
    ]
    doc["supply"] = list(inst.supply)
    if inst.m != len(inst.valuations):
        doc["m"] = inst.m
    if inst.walrasian or inst.covering:
        doc["mode"] = {}
        if inst.walrasian:
            doc["mode"]["walrasian"] = True
        if inst.covering:
            doc["mode"]["covering"] = True
    if inst.faces is not None:
        doc["faces"] = [
            [sorted(i + 1 for i in q.as_bundle()) for q in f.vertices]
            for f in inst.faces
        ]
    if inst.point is not None:
        doc["point"] = list(inst.point.coords)
    return doc


def load_instance(path: str) -> InstanceFile:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    return parse_instance(doc)


def parse_price(doc: dict, graph: ValueGraph, where: str = "price") -> PriceVector:
    vw = doc.get("vertex")
    if not isinstance(vw, list) or len(vw) != graph.n:
        raise ParseError(f"{where}.vertex: need a list of {graph.n} rationals")
    entries = [_rational(x, f"{where}.vertex[{i}]") for i, x in enumerate(vw)]
    by_edge = {
        _parse_edge_key(k, graph.n, f"{where}.edge"): _rational(x, f"{where}.edge[{k}]")
        for k, x in doc.get("edge", {}).items()
    }
    entries.extend(by_edge.get(e, Fraction(0)) for e in graph.edges)
    return PriceVector(
        graph, tuple(entries), linear_only=bool(doc.get("linear_only", False))
    )


def print_price(p: PriceVector) -> dict:
    g = p.graph
    doc: dict[str, Any] = {
        "vertex": [str(x) for x in p.entries[: g.n]],
        "edge": {
            _edge_key(e): str(p.entries[g.n + k])
            for k, e in enumerate(g.edges)
            if p.entries[g.n + k] != 0
        },
    }
    if p.linear_only:
        doc["linear_only"] = True
    return doc


def parse_bundles(raw: Any, graph: ValueGraph, where: str) -> Allocation:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: need a list of bundles")
    alloc = []
    for b, items in enumerate(raw):
        try:
            S = frozenset(int(i) - 1 for i in items)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}[{b}]: bad bundle {items!r}") from exc
        for i in S:
            if not 0 <= i < graph.n:
                raise ParseError(f"{where}[{b}]: item {i + 1} out of range")
        alloc.append(S)
    return tuple(alloc)


def print_bundles(alloc: Sequence[Bundle]) -> list[list[int]]:
    return [sorted(i + 1 for i in S) for S in alloc]


def parse_alloc_price(doc: dict, graph: ValueGraph) -> tuple[Allocation, PriceVector]:
    if "allocation" not in doc or "price" not in doc:
        raise ParseError("allocation+price file needs 'allocation' and 'price'")
    alloc = parse_bundles(doc["allocation"], graph, "allocation")
    price = parse_price(doc["price"], graph)
    return alloc, price


CORPUS_NAMES = ("cutlery", "cutlery-shifted", "house", "idp-k4")


def corpus_instance(name: str) -> InstanceFile:
    """Built-in instances: the three-agent triangle auction where only a
    quadratic CE exists, its shifted variant with a pricing equilibrium,
    the five-vertex house graph whose edge faces defeat vertex-sum
    decomposition, and the K4 point witnessing the failure of integer
    decomposition."""
    if name == "cutlery":
        g = ValueGraph.complete(3)
        zero = [Fraction(0)] * 3
        vals = tuple(
            Valuation(g, tuple(zero + [Fraction(1) if k == e else Fraction(0) for k in range(3)]))
            for e in range(3)
        )
        return InstanceFile(g, vals, (1, 1, 1), 3, name="cutlery")
    if name == "cutlery-shifted":
        base = corpus_instance("cutlery")
        ones = [Fraction(1)] * base.graph.d
        from .model import shift

        return InstanceFile(
            base.graph,
            tuple(shift(v, ones) for v in base.valuations),
            base.supply,
            base.m,
            name="cutlery-shifted",
        )
    if name == "house":
        g = ValueGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (3, 4)])
        faces = (
            Face.from_bundles(g, [[1], [0, 2]]),
            Face.from_bundles(g, [[2], [1, 3]]),
            Face.from_bundles(g, [[4], [0]]),
            Face.from_bundles(g, [[4], [3]]),
        )
        point = GPoint(g, (1, 1, 1, 1, 1) + (0,) * 6)
        return InstanceFile(
            g, (), (1, 1, 1, 1, 1), 4, faces=faces, point=point, name="house"
        )
    if name == "idp-k4":
        g = ValueGraph.complete(4)
        faces = (
            Face.from_bundles(g, [[], [3]]),
            Face.from_bundles(g, [[1, 2], [0, 2]]),
            Face.from_bundles(g, [[1, 2, 3], [0, 2, 3]]),
            Face.from_bundles(g, [[0, 1], [0, 1, 3]]),
        )
        point = GPoint(g, (2, 2, 2, 2, 1, 1, 1, 1, 1, 1))
        return InstanceFile(
            g, (), (2, 2, 2, 2), 4, faces=faces, point=point, name="idp-k4"
        )
    raise ParseError(f"unknown corpus name {name!r}; choose from {CORPUS_NAMES}")
