"""Exact fastest-simplest / simplest-fastest routing.

The searches run over expanded nodes ``(node, road)`` where ``road`` is the
road the partial route arrived on. Costs are additive on that graph, so a
label-setting search (Dijkstra under a lexicographic order) is exact even
though it is not exact on plain nodes.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field

from .errors import Unreachable, UnsupportedCostTable
from .model import (
    LexOrder,
    RoadNetwork,
    Route,
    lex_less,
    make_route,
    reachable,
    reverse_network,
)

INF = math.inf


@dataclass
class Label:
    node: int
    road: int
    length: float
    complexity: float
    prev: tuple[int, int] | None = None
    final: bool = False

    @property
    def expanded(self) -> tuple[int, int]:
        return (self.node, self.road)


@dataclass
class RouteAnswer:
    length: float
    complexity: float
    route: Route
    labels_deheaped: int = 0
    labels_enheaped: int = 0
    chain: tuple[Label, ...] = ()
    road_sequences_enumerated: int = 0
    notes: tuple[str, ...] = ()

    @property
    def routes_examined(self) -> int:
        return self.road_sequences_enumerated or self.labels_deheaped


@dataclass
class SearchTree:
    """Result of a single-source label-setting run."""

    source: int
    order: LexOrder
    length: list[float]
    complexity: list[float]
    first: list[Label | None]
    labels: dict[tuple[int, int], Label]
    labels_deheaped: int = 0
    labels_enheaped: int = 0

    def backtrack(self, node: int) -> list[int]:
        """Nodes from ``node`` back to the source, following the first final label at ``node``."""
        label = self.first[node]
        if label is None:
            raise Unreachable(f"node {node} not reached from {self.source}")
        return [lab.node for lab in _chain(self.labels, label)][::-1]

    def route_to(self, node: int) -> list[int]:
        return self.backtrack(node)[::-1]


def _chain(labels: dict[tuple[int, int], Label], last: Label) -> list[Label]:
    out = [last]
    while out[-1].prev is not None:
        out.append(labels[out[-1].prev])
    out.reverse()
    return out


def _label_setting(
    net: RoadNetwork,
    source: int,
    order: LexOrder,
    target: int | None = None,
    trace: list[tuple[float, float]] | None = None,
) -> SearchTree:
    n = net.node_count
    table = net.turn_costs
    out_edges = net.out_edges
    fs = order is LexOrder.FS
    labels: dict[tuple[int, int], Label] = {}
    first: list[Label | None] = [None] * n
    length = [INF] * n
    complexity = [INF] * n
    heap: list[tuple[float, float, int, int]] = []
    enheaped = deheaped = 0

    for r in net.roads_at[source]:
        labels[(source, r)] = Label(source, r, 0.0, 0.0)
        heap.append((0.0, 0.0, source, r))
        enheaped += 1
    heapq.heapify(heap)

    while heap:
        k1, k2, x, ri = heapq.heappop(heap)
        lab = labels[(x, ri)]
        if lab.final:
            continue
        if ((lab.complexity, lab.length) if fs else (lab.length, lab.complexity)) != (k1, k2):
            continue  # superseded entry
        lab.final = True
        deheaped += 1
        if trace is not None:
            trace.append((k1, k2))
        if first[x] is None:
            first[x] = lab
            length[x] = lab.length
            complexity[x] = lab.complexity
        if x == target:
            break
        for e in out_edges[x]:
            rj = e.road
            nl = lab.length + e.length
            nc = lab.complexity if ri == rj else lab.complexity + table.cost(x, ri, rj)
            key = (e.head, rj)
            cur = labels.get(key)
            if cur is None:
                labels[key] = Label(e.head, rj, nl, nc, (x, ri))
            elif not cur.final and lex_less(order, (nl, nc), (cur.length, cur.complexity)):
                cur.length, cur.complexity, cur.prev = nl, nc, (x, ri)
            else:
                continue
            heapq.heappush(heap, (nc, nl, e.head, rj) if fs else (nl, nc, e.head, rj))
            enheaped += 1

    return SearchTree(source, order, length, complexity, first, labels, deheaped, enheaped)


def _single_pair(net: RoadNetwork, n_s: int, n_t: int, order: LexOrder, trace=None) -> RouteAnswer:
    tree = _label_setting(net, n_s, order, target=n_t, trace=trace)
    last = tree.first[n_t]
    if last is None:
        raise Unreachable(f"{net.names[n_t]} is not reachable from {net.names[n_s]}")
    chain = tuple(_chain(tree.labels, last))
    route = make_route(net, [lab.node for lab in chain])
    return RouteAnswer(
        last.length,
        last.complexity,
        route,
        labels_deheaped=tree.labels_deheaped,
        labels_enheaped=tree.labels_enheaped,
        chain=chain,
    )


def fastest_simplest(net: RoadNetwork, n_s: int, n_t: int, *, trace=None) -> RouteAnswer:
    """Shortest route among those with minimum complexity."""
    return _single_pair(net, n_s, n_t, LexOrder.FS, trace)


def simplest_fastest(net: RoadNetwork, n_s: int, n_t: int, *, trace=None) -> RouteAnswer:
    """Least complex route among those with minimum length."""
    return _single_pair(net, n_s, n_t, LexOrder.SF, trace)


def all_fastest_simplest(net: RoadNetwork, n_src: int) -> SearchTree:
    return _label_setting(net, n_src, LexOrder.FS)


def all_simplest_fastest(net: RoadNetwork, n_src: int) -> SearchTree:
    return _label_setting(net, n_src, LexOrder.SF)


@dataclass
class CostArrays:
    """Per-node costs of the fastest-simplest and simplest-fastest routes *to* a target."""

    target: int
    fsL: list[float]
    fsC: list[float]
    sfL: list[float]
    sfC: list[float]
    fs_tree: SearchTree | None = field(default=None, repr=False)
    sf_tree: SearchTree | None = field(default=None, repr=False)

    def fs_route_from(self, node: int) -> list[int]:
        assert self.fs_tree is not None
        return self.fs_tree.backtrack(node)

    def sf_route_from(self, node: int) -> list[int]:
        assert self.sf_tree is not None
        return self.sf_tree.backtrack(node)

    @classmethod
    def zeros(cls, n: int, target: int) -> CostArrays:
        return cls(target, [0.0] * n, [0.0] * n, [0.0] * n, [0.0] * n)


def cost_arrays(net: RoadNetwork, n_t: int) -> CostArrays:
    """Run both single-source searches from ``n_t`` on the reversed network."""
    rev = reverse_network(net)
    fs = all_fastest_simplest(rev, n_t)
    sf = all_simplest_fastest(rev, n_t)
    return CostArrays(n_t, fs.length, fs.complexity, sf.length, sf.complexity, fs, sf)


def dijkstra_fastest(net: RoadNetwork, n_s: int, n_t: int) -> float:
    dist = [INF] * net.node_count
    dist[n_s] = 0.0
    heap = [(0.0, n_s)]
    done = [False] * net.node_count
    while heap:
        d, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        if x == n_t:
            return d
        for e in net.out_edges[x]:
            nd = d + e.length
            if nd < dist[e.head]:
                dist[e.head] = nd
                heapq.heappush(heap, (nd, e.head))
    raise Unreachable(f"{net.names[n_t]} is not reachable from {net.names[n_s]}")


def intersection_graph(net: RoadNetwork) -> list[tuple[int, ...]]:
    """Adjacency of the road intersection graph: roads sharing at least one node."""
    adj: list[set[int]] = [set() for _ in net.roads]
    for roads in net.roads_at:
        for r in roads:
            adj[r].update(x for x in roads if x != r)
    return [tuple(sorted(s)) for s in adj]


def _along(net: RoadNetwork, road: int, a: int, b: int) -> tuple[float, list[int]] | None:
    """Distance and node path from ``a`` to ``b`` travelling along one road, or None."""
    nodes = net.roads[road].nodes
    pa, pb = nodes.index(a), nodes.index(b)
    if pa == pb:
        return 0.0, [a]
    if pa < pb:
        path = list(nodes[pa : pb + 1])
    elif net.roads[road].bidirectional:
        path = list(nodes[pb : pa + 1])[::-1]
    else:
        return None
    seg = net.segment_lengths
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += seg[(u, v)] if (u, v) in seg else seg[(v, u)]
    return total, path


def realize_road_sequence(net: RoadNetwork, seq: list[int], n_s: int, n_t: int) -> Route | None:
    """Minimum-length route that rides the roads of ``seq`` in order.

    Each road in the sequence carries at least one edge; junctions between
    consecutive roads are chosen by dynamic programming.
    """
    if not seq or n_s not in net.roads[seq[0]].nodes or n_t not in net.roads[seq[-1]].nodes:
        return None
    # entry node -> (distance so far, path so far)
    states: dict[int, tuple[float, list[int]]] = {n_s: (0.0, [n_s])}
    for cur, nxt in zip(seq, seq[1:]):
        junctions = sorted(set(net.roads[cur].nodes) & set(net.roads[nxt].nodes))
        new: dict[int, tuple[float, list[int]]] = {}
        for j in junctions:
            best: tuple[float, list[int]] | None = None
            for e in sorted(states):
                if e == j:
                    continue
                hop = _along(net, cur, e, j)
                if hop is None:
                    continue
                d = states[e][0] + hop[0]
                if best is None or d < best[0]:
                    best = (d, states[e][1] + hop[1][1:])
            if best is not None:
                new[j] = best
        if not new:
            return None
        states = new
    best = None
    for e in sorted(states):
        if e == n_t:
            continue
        hop = _along(net, seq[-1], e, n_t)
        if hop is None:
            continue
        d = states[e][0] + hop[0]
        if best is None or d < best[0]:
            best = (d, states[e][1] + hop[1][1:])
    if best is None:
        return None
    return make_route(net, best[1])


def _min_hops(adj: list[tuple[int, ...]], sources: tuple[int, ...], targets: set[int]) -> int | None:
    dist = {r: 0 for r in sources}
    queue = deque(sources)
    while queue:
        r = queue.popleft()
        if r in targets:
            return dist[r]
        for q in adj[r]:
            if q not in dist:
                dist[q] = dist[r] + 1
                queue.append(q)
    return None


def bsl_fastest_simplest(net: RoadNetwork, n_s: int, n_t: int) -> RouteAnswer:
    """Baseline: enumerate minimum-hop road sequences on the intersection graph.

    ``road_sequences_enumerated`` counts every road sequence (prefix) pushed by
    the depth-limited DFS.
    """
    if not net.turn_costs.uniform:
        raise UnsupportedCostTable("the baseline assumes unit turn costs")
    if n_s == n_t:
        return RouteAnswer(0.0, 0.0, make_route(net, [n_s]))
    if not reachable(net, n_s)[n_t]:
        raise Unreachable(f"{net.names[n_t]} is not reachable from {net.names[n_s]}")

    adj = intersection_graph(net)
    sources = net.roads_at[n_s]
    targets = set(net.roads_at[n_t])
    hops = _min_hops(adj, sources, targets)
    assert hops is not None  # reachable implies connected roads
    depth = hops
    enumerated = 0
    notes: list[str] = []
    while True:
        best: Route | None = None
        for r0 in sources:
            stack = [(r0, [r0])]
            while stack:
                road, seq = stack.pop()
                enumerated += 1
                if len(seq) == depth + 1:
                    if road in targets:
                        route = realize_road_sequence(net, seq, n_s, n_t)
                        if route is not None and (best is None or route.length < best.length):
                            best = route
                    continue
                for q in reversed(adj[road]):
                    if q != seq[-1]:
                        stack.append((q, seq + [q]))
        if best is not None:
            if depth > hops:
                notes.append(f"minimum-hop sequences unrealizable; used depth {depth} instead of {hops}")
            return RouteAnswer(
                best.length,
                best.complexity,
                best,
                road_sequences_enumerated=enumerated,
                notes=tuple(notes),
            )
        depth += 1
        if depth > net.node_count:
            raise Unreachable("no realizable road sequence")  # pragma: no cover - guarded by reachability
