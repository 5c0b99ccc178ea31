"""Turn-aware route planning: fastest/simplest routes and near-optimal trade-offs."""

from .errors import (
    DanglingNodeRef,
    EmptySet,
    EpsilonNegative,
    IncompatibleTemplate,
    InvalidRoute,
    InvalidTurnCost,
    NetworkError,
    NetworkSyntaxError,
    NodeNotOnRoad,
    NonPositiveLength,
    OrphanNode,
    OverlappingRoads,
    RoutingError,
    TauTooSmall,
    TooLarge,
    Unreachable,
    UnsupportedCostTable,
)
from .io import ResultRecord, parse_network, parse_results, write_network, write_results
from .model import (
    CostPair,
    LexOrder,
    RoadNetwork,
    Route,
    TurnCostTable,
    build_network,
    compare,
    make_route,
    route_complexity,
    route_length,
    turn_cost,
)
from .near import NearAnswer, fns_astar, fns_dfs, snf_astar, snf_dfs
from .optimal import (
    RouteAnswer,
    all_fastest_simplest,
    all_simplest_fastest,
    bsl_fastest_simplest,
    cost_arrays,
    fastest_simplest,
    simplest_fastest,
)
from .oracle import enumerate_simple_routes, oracle_best, oracle_near
from .synth import compose, default_template, fixture_table1, gen_grid_backbone, gen_ring_backbone

__version__ = "0.1.0"
