"""Road-network data model, cost functions and the lexicographic cost orders.

Nodes and roads are dense integer indices. A road is a sequence of distinct
nodes; every pair of consecutive nodes yields a directed edge (two when the
road is two-way) and each directed edge belongs to exactly one road.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import pairwise
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DanglingNodeRef,
    InvalidRoute,
    InvalidTurnCost,
    NetworkError,
    NodeNotOnRoad,
    NonPositiveLength,
    OrphanNode,
    OverlappingRoads,
)

REL_TOL = 1e-9
ABS_TOL = 1e-12

Coord = tuple[float, float]


def close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL)


def leq(a: float, b: float) -> bool:
    """``a <= b`` up to the library-wide float tolerance."""
    return a <= b or close(a, b)


def lt(a: float, b: float) -> bool:
    """``a < b`` and not equal under tolerance."""
    return a < b and not close(a, b)


class CostPair(NamedTuple):
    length: float
    complexity: float


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class LexOrder(enum.Enum):
    """FS compares complexity first, SF compares length first."""

    FS = "fs"
    SF = "sf"

    def key(self, length: float, complexity: float) -> tuple[float, float]:
        if self is LexOrder.FS:
            return (complexity, length)
        return (length, complexity)


def compare(order: LexOrder, a: CostPair | tuple[float, float], b: CostPair | tuple[float, float]) -> Ordering:
    ka = order.key(a[0], a[1])
    kb = order.key(b[0], b[1])
    for x, y in zip(ka, kb):
        if close(x, y):
            continue
        return Ordering.LESS if x < y else Ordering.GREATER
    return Ordering.EQUAL


def lex_less(order: LexOrder, a: tuple[float, float], b: tuple[float, float]) -> bool:
    return compare(order, a, b) is Ordering.LESS


@dataclass(frozen=True)
class Road:
    road_id: int
    nodes: tuple[int, ...]
    bidirectional: bool = True
    name: str = ""

    def segments(self) -> Iterable[tuple[int, int]]:
        return pairwise(self.nodes)


class Edge(NamedTuple):
    head: int
    length: float
    road: int


@dataclass(frozen=True)
class TurnCostTable:
    """Turn costs: zero on the same road, ``default_change`` otherwise, unless overridden."""

    default_change: float = 1.0
    overrides: Mapping[tuple[int, int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.default_change < 0 or not math.isfinite(self.default_change):
            raise InvalidTurnCost(f"default turn cost must be finite and >= 0, got {self.default_change}")
        for (n, ri, rj), c in self.overrides.items():
            if ri == rj:
                raise InvalidTurnCost(f"same-road turn cost override at node {n} road {ri}")
            if c < 0 or not math.isfinite(c):
                raise InvalidTurnCost(f"turn cost must be finite and >= 0, got {c}")

    @property
    def cmax(self) -> float:
        return max([self.default_change, *self.overrides.values()])

    @property
    def uniform(self) -> bool:
        return self.default_change == 1.0 and all(c == 1.0 for c in self.overrides.values())

    def cost(self, n: int, ri: int, rj: int) -> float:
        if ri == rj:
            return 0.0
        return self.overrides.get((n, ri, rj), self.default_change)

    def transposed(self) -> TurnCostTable:
        return TurnCostTable(
            self.default_change,
            {(n, rj, ri): c for (n, ri, rj), c in self.overrides.items()},
        )


class RoadNetwork:
    """Immutable road network; construct through :func:`build_network`."""

    def __init__(
        self,
        names: tuple[str, ...],
        coords: tuple[Coord | None, ...],
        roads: tuple[Road, ...],
        segment_lengths: dict[tuple[int, int], float],
        turn_costs: TurnCostTable,
    ) -> None:
        self.names = names
        self.coords = coords
        self.roads = roads
        self.segment_lengths = segment_lengths
        self.turn_costs = turn_costs
        n = len(names)
        out: list[list[Edge]] = [[] for _ in range(n)]
        inc: list[list[Edge]] = [[] for _ in range(n)]
        at: list[set[int]] = [set() for _ in range(n)]
        edge_road: dict[tuple[int, int], int] = {}
        for road in roads:
            for v in road.nodes:
                at[v].add(road.road_id)
            for a, b in road.segments():
                length = segment_lengths[(a, b)]
                pairs = [(a, b), (b, a)] if road.bidirectional else [(a, b)]
                for u, v in pairs:
                    if (u, v) in edge_road:
                        raise OverlappingRoads(
                            f"segment ({names[u]}, {names[v]}) appears in roads "
                            f"{roads[edge_road[(u, v)]].name} and {road.name}"
                        )
                    edge_road[(u, v)] = road.road_id
                    out[u].append(Edge(v, length, road.road_id))
                    inc[v].append(Edge(u, length, road.road_id))
        for edges in out:
            edges.sort(key=lambda e: (e.head, e.road))
        for edges in inc:
            edges.sort(key=lambda e: (e.head, e.road))
        self.out_edges: tuple[tuple[Edge, ...], ...] = tuple(tuple(e) for e in out)
        self.in_edges: tuple[tuple[Edge, ...], ...] = tuple(tuple(e) for e in inc)
        self.roads_at: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in at)
        self._edge_road = edge_road
        self._edge_len = {uv: segment_lengths[uv] if uv in segment_lengths else segment_lengths[uv[::-1]]
                          for uv in edge_road}
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def node_count(self) -> int:
        return len(self.names)

    @property
    def edge_count(self) -> int:
        return len(self._edge_road)

    @property
    def cmax(self) -> float:
        return self.turn_costs.cmax

    def node(self, ref: int | str) -> int:
        """Resolve a node name or index to its dense index."""
        if isinstance(ref, str):
            try:
                return self._index[ref]
            except KeyError:
                raise DanglingNodeRef(f"unknown node {ref!r}") from None
        if not 0 <= ref < len(self.names):
            raise DanglingNodeRef(f"node index {ref} out of range")
        return ref

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self._edge_road

    def road_of_edge(self, a: int, b: int) -> int:
        try:
            return self._edge_road[(a, b)]
        except KeyError:
            raise InvalidRoute(f"no edge ({self.names[a]}, {self.names[b]})") from None

    def edge_length(self, a: int, b: int) -> float:
        try:
            return self._edge_len[(a, b)]
        except KeyError:
            raise InvalidRoute(f"no edge ({self.names[a]}, {self.names[b]})") from None

    def edges(self) -> Iterable[tuple[int, int, float, int]]:
        for a, es in enumerate(self.out_edges):
            for e in es:
                yield a, e.head, e.length, e.road

    def edge_set(self) -> set[tuple[int, int, float, int]]:
        return set(self.edges())

    def intersections(self) -> list[int]:
        return [n for n, rs in enumerate(self.roads_at) if len(rs) >= 2]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RoadNetwork):
            return NotImplemented
        return (
            self.names == other.names
            and self.coords == other.coords
            and self.roads == other.roads
            and self.segment_lengths == other.segment_lengths
            and self.turn_costs.default_change == other.turn_costs.default_change
            and dict(self.turn_costs.overrides) == dict(other.turn_costs.overrides)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RoadNetwork(nodes={self.node_count}, roads={len(self.roads)}, edges={self.edge_count})"


def build_network(
    nodes: int | Sequence[str],
    roads: Sequence[Sequence[int | str] | tuple[Sequence[int | str], bool]],
    lengths: Mapping[tuple[int | str, int | str], float] | None = None,
    turn_costs: TurnCostTable | Mapping[tuple[int | str, int, int], float] | None = None,
    *,
    coords: Sequence[Coord | None] | None = None,
    road_names: Sequence[str] | None = None,
    default_turn_cost: float = 1.0,
) -> RoadNetwork:
    """Validate and assemble a :class:`RoadNetwork`.

    ``roads`` items are either a node sequence (two-way road) or a pair
    ``(node_sequence, bidirectional)``. Node references may be indices or names.
    ``lengths`` gives per-segment lengths keyed by either orientation; missing
    segments use the Euclidean distance when both endpoints have coordinates,
    else 1.0.
    """
    names = tuple(str(i) for i in range(nodes)) if isinstance(nodes, int) else tuple(nodes)
    if len(set(names)) != len(names):
        raise NetworkError("duplicate node names")
    index = {name: i for i, name in enumerate(names)}
    coords_t: tuple[Coord | None, ...] = (
        tuple(None if c is None else (float(c[0]), float(c[1])) for c in coords)
        if coords is not None
        else (None,) * len(names)
    )
    if len(coords_t) != len(names):
        raise NetworkError("coords length does not match node count")

    def resolve(ref: int | str) -> int:
        if isinstance(ref, str):
            if ref not in index:
                raise DanglingNodeRef(f"unknown node {ref!r}")
            return index[ref]
        if not 0 <= ref < len(names):
            raise DanglingNodeRef(f"node index {ref} out of range")
        return int(ref)

    if not roads:
        raise NetworkError("a network needs at least one road")
    built: list[Road] = []
    for rid, item in enumerate(roads):
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], bool):
            seq, bidir = item
        else:
            seq, bidir = item, True
        seq_i = tuple(resolve(x) for x in seq)
        rname = road_names[rid] if road_names is not None else f"r{rid}"
        if len(seq_i) < 2:
            raise NetworkError(f"road {rname} has fewer than 2 nodes")
        if len(set(seq_i)) != len(seq_i):
            raise NetworkError(f"road {rname} repeats a node")
        built.append(Road(rid, seq_i, bool(bidir), rname))

    given: dict[tuple[int, int], float] = {}
    for (a, b), value in (lengths or {}).items():
        given[(resolve(a), resolve(b))] = float(value)

    seg_len: dict[tuple[int, int], float] = {}
    for road in built:
        for a, b in road.segments():
            if (a, b) in given:
                value = given.pop((a, b))
            elif (b, a) in given:
                value = given.pop((b, a))
            elif coords_t[a] is not None and coords_t[b] is not None:
                (xa, ya), (xb, yb) = coords_t[a], coords_t[b]  # type: ignore[misc]
                value = math.hypot(xb - xa, yb - ya)
            else:
                value = 1.0
            if not (value > 0) or not math.isfinite(value):
                raise NonPositiveLength(
                    f"segment ({names[a]}, {names[b]}) of road {road.name} has length {value}"
                )
            if (a, b) in seg_len or (b, a) in seg_len:
                raise OverlappingRoads(f"segment ({names[a]}, {names[b]}) appears in more than one road")
            seg_len[(a, b)] = value
    if given:
        (a, b), _ = next(iter(given.items()))
        raise NetworkError(f"length given for ({names[a]}, {names[b]}) which is not a road segment")

    covered = set()
    for road in built:
        covered.update(road.nodes)
    for n in range(len(names)):
        if n not in covered:
            raise OrphanNode(f"node {names[n]} lies on no road")

    if isinstance(turn_costs, TurnCostTable):
        table = turn_costs
    else:
        overrides = {(resolve(n), int(ri), int(rj)): float(c) for (n, ri, rj), c in (turn_costs or {}).items()}
        table = TurnCostTable(float(default_turn_cost), overrides)
    for (n, ri, rj) in table.overrides:
        for r in (ri, rj):
            if not 0 <= r < len(built):
                raise InvalidTurnCost(f"unknown road index {r}")
            if n not in built[r].nodes:
                raise InvalidTurnCost(f"node {names[n]} is not on road {built[r].name}")

    return RoadNetwork(names, coords_t, tuple(built), seg_len, table)


def turn_cost(net: RoadNetwork, n: int, road_i: int, road_j: int) -> float:
    for r in (road_i, road_j):
        if r not in net.roads_at[n]:
            raise NodeNotOnRoad(f"node {net.names[n]} is not on road {r}")
    return net.turn_costs.cost(n, road_i, road_j)


@dataclass(frozen=True)
class Route:
    nodes: tuple[int, ...]
    length: float
    complexity: float

    @property
    def cost(self) -> CostPair:
        return CostPair(self.length, self.complexity)

    def __len__(self) -> int:
        return len(self.nodes)


def _check_route(net: RoadNetwork, nodes: Sequence[int]) -> None:
    if len(nodes) == 0:
        raise InvalidRoute("empty route")
    for n in nodes:
        if not 0 <= n < net.node_count:
            raise InvalidRoute(f"node index {n} out of range")


def route_length(net: RoadNetwork, nodes: Sequence[int]) -> float:
    _check_route(net, nodes)
    return sum((net.edge_length(a, b) for a, b in pairwise(nodes)), 0.0)


def route_complexity(net: RoadNetwork, nodes: Sequence[int]) -> float:
    _check_route(net, nodes)
    total = 0.0
    for i in range(1, len(nodes) - 1):
        a, b, c = nodes[i - 1], nodes[i], nodes[i + 1]
        total += net.turn_costs.cost(b, net.road_of_edge(a, b), net.road_of_edge(b, c))
    if len(nodes) == 2:
        net.road_of_edge(nodes[0], nodes[1])
    return total


def make_route(net: RoadNetwork, nodes: Sequence[int]) -> Route:
    nodes = tuple(nodes)
    return Route(nodes, route_length(net, nodes), route_complexity(net, nodes))


def reverse_network(net: RoadNetwork) -> RoadNetwork:
    """Flip every edge; roads keep their ids and turn costs are transposed."""
    roads = tuple(Road(r.road_id, r.nodes[::-1], r.bidirectional, r.name) for r in net.roads)
    seg = {(b, a): v for (a, b), v in net.segment_lengths.items()}
    return RoadNetwork(net.names, net.coords, roads, seg, net.turn_costs.transposed())


def reachable(net: RoadNetwork, source: int, *, reverse: bool = False) -> list[bool]:
    adjacency = net.in_edges if reverse else net.out_edges
    seen = [False] * net.node_count
    seen[source] = True
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for e in adjacency[x]:
            if not seen[e.head]:
                seen[e.head] = True
                queue.append(e.head)
    return seen


def is_strongly_connected(net: RoadNetwork) -> bool:
    return all(reachable(net, 0)) and all(reachable(net, 0, reverse=True))
