"""Shared test helpers: an independent brute-force route enumerator, a broken
per-node-label search kept as a regression foil, and random corpora."""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from turnroute.model import RoadNetwork
from turnroute.synth import compose, default_template, gen_grid_backbone, gen_ring_backbone, random_network

REL = 1e-9


def approx(a: float, b: float, rel: float = REL) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b)) + 1e-12


def same_cost(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return approx(a[0], b[0]) and approx(a[1], b[1])


def brute_force_routes(net: RoadNetwork, s: int, t: int) -> list[tuple[float, float, tuple[int, ...]]]:
    """All simple s-t routes as (length, complexity, nodes).

    Rebuilds adjacency and turn costs straight from the road definitions so it
    shares no costing code with the library.
    """
    adj: dict[int, list[tuple[int, float, int]]] = {}
    for road in net.roads:
        for a, b in zip(road.nodes, road.nodes[1:]):
            w = net.segment_lengths[(a, b)]
            adj.setdefault(a, []).append((b, w, road.road_id))
            if road.bidirectional:
                adj.setdefault(b, []).append((a, w, road.road_id))
    table = net.turn_costs
    out = []

    def walk(x: int, seen: set[int], nodes: list[int], length: float, cpl: float, road: int | None) -> None:
        if x == t:
            out.append((length, cpl, tuple(nodes)))
            return
        for y, w, r in adj.get(x, ()):
            if y in seen:
                continue
            turn = 0.0
            if road is not None and road != r:
                turn = table.overrides.get((x, road, r), table.default_change)
            seen.add(y)
            nodes.append(y)
            walk(y, seen, nodes, length + w, cpl + turn, r)
            nodes.pop()
            seen.discard(y)

    walk(s, {s}, [s], 0.0, 0.0, None)
    return out


@dataclass
class Reference:
    fs: tuple[float, float]
    sf: tuple[float, float]
    routes: list[tuple[float, float, tuple[int, ...]]]

    def snf(self, eps: float) -> tuple[float, float]:
        bound = (1 + eps) * self.sf[0]
        ok = [(c, l) for l, c, _ in self.routes if l <= bound * (1 + REL) + 1e-12]
        c, l = _lexmin(ok)
        return (l, c)

    def fns(self, eps: float) -> tuple[float, float]:
        bound = (1 + eps) * self.fs[1]
        ok = [(l, c) for l, c, _ in self.routes if c <= bound * (1 + REL) + 1e-12]
        return _lexmin(ok)


def _lexmin(pairs: list[tuple[float, float]]) -> tuple[float, float]:
    """Lexicographic minimum that treats values within tolerance as equal."""
    best = pairs[0]
    for p in pairs[1:]:
        if approx(p[0], best[0]):
            if p[1] < best[1] and not approx(p[1], best[1]):
                best = p
        elif p[0] < best[0]:
            best = p
    return best


def reference(net: RoadNetwork, s: int, t: int) -> Reference:
    routes = brute_force_routes(net, s, t)
    fs = _lexmin([(c, l) for l, c, _ in routes])
    sf = _lexmin([(l, c) for l, c, _ in routes])
    return Reference((fs[1], fs[0]), sf, routes)


def per_node_fastest_simplest(net: RoadNetwork, s: int, t: int) -> tuple[float, float]:
    """Deliberately wrong: one label per node, as if costs were sub-route optimal on nodes.

    Ties keep the first label to arrive, so the road a node was reached on is
    arbitrary and later turn costs can be charged wrongly.
    """
    best: dict[int, tuple[float, float, int | None]] = {s: (0.0, 0.0, None)}
    done: set[int] = set()
    heap = [(0.0, 0.0, s)]
    while heap:
        cpl, length, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == t:
            return (length, cpl)
        road = best[x][2]
        for e in net.out_edges[x]:
            nc = cpl if road is None or road == e.road else cpl + net.turn_costs.cost(x, road, e.road)
            nl = length + e.length
            cur = best.get(e.head)
            if cur is None or (nc, nl) < (cur[1], cur[0]):
                best[e.head] = (nl, nc, e.road)
                heapq.heappush(heap, (nc, nl, e.head))
    raise ValueError("unreachable")


def random_corpus(count: int, seed: int, lo: int = 6, hi: int = 12) -> list[tuple[RoadNetwork, int, int]]:
    """``count`` strongly connected random networks, each with one query pair."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        net = random_network(rng, rng.randint(lo, hi), oneway_prob=rng.choice([0.0, 0.3, 0.6]))
        s, t = rng.sample(range(net.node_count), 2)
        out.append((net, s, t))
    return out


def composed_networks() -> list[RoadNetwork]:
    """Twenty small composed networks (grid and ring backbones, several seeds)."""
    template, entrances = default_template()
    nets = []
    for seed in range(5):
        for backbone in (gen_grid_backbone(2), gen_grid_backbone(3), gen_ring_backbone(1), gen_ring_backbone(2)):
            nets.append(compose(backbone, template, entrances, seed))
    return nets
