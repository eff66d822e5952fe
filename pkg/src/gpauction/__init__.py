"""Competitive equilibria for multi-unit combinatorial auctions with
quadratic valuations and anonymous quadratic pricing."""

from .caps import Caps, CapExceededError, DEFAULT_CAPS
from .model import (
    Allocation,
    Bundle,
    GPoint,
    NEG_INF,
    PriceVector,
    Valuation,
    ValueGraph,
    aggregate,
    char_vector,
    project,
    shift,
    value,
)
from .polytope import (
    CliqueDecomposition,
    Face,
    clique_decompose,
    enumerate_decompositions,
    minkowski_contains,
    nested_chain_point,
    padberg_check,
    vertex_sum_contains,
    vertices_P,
)
from .demand import (
    DemandSet,
    demand_set,
    max_welfare,
    seller_demand,
    verify_ce,
    verify_pe,
    walrasian_exists,
)
from .assignment import FlowNetwork, label_faces, max_flow_integral
from .linprog import LinearProgram, LPResult, lp_solve
from .pricing import (
    CEResult,
    FOUND,
    INFEASIBLE_AT_POINT,
    NO_POINT_FOUND,
    big_M,
    ce_for_covering,
    ce_price_at_point,
    optimal_ce,
)

__version__ = "0.1.0"
