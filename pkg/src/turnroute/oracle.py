"""Exhaustive reference answers for small networks."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptySet, TooLarge
from .model import LexOrder, RoadNetwork, Route, compare, leq, make_route, Ordering

MAX_NODES = 14


@dataclass(frozen=True)
class RouteSet:
    routes: tuple[Route, ...]

    def __len__(self) -> int:
        return len(self.routes)

    def __iter__(self):
        return iter(self.routes)


def enumerate_simple_routes(
    net: RoadNetwork, n_s: int, n_t: int, max_nodes_limit: int = MAX_NODES
) -> RouteSet:
    """Every simple directed route from ``n_s`` to ``n_t``, with exact costs."""
    if net.node_count > max_nodes_limit:
        raise TooLarge(f"{net.node_count} nodes exceeds the oracle limit of {max_nodes_limit}")
    found: list[Route] = []
    path = [n_s]
    on_path = {n_s}

    def extend(x: int) -> None:
        if x == n_t:
            found.append(make_route(net, path))
            return
        for e in net.out_edges[x]:
            if e.head in on_path:
                continue
            path.append(e.head)
            on_path.add(e.head)
            extend(e.head)
            on_path.discard(e.head)
            path.pop()

    extend(n_s)
    return RouteSet(tuple(found))


def _minimal(routes, order: LexOrder) -> tuple[float, float]:
    best = None
    for r in routes:
        if best is None or compare(order, r.cost, best) is Ordering.LESS:
            best = r.cost
    if best is None:
        raise EmptySet("no routes")
    return (best.length, best.complexity)


def oracle_best(route_set: RouteSet, order: LexOrder) -> tuple[float, float]:
    return _minimal(route_set, order)


def oracle_near(route_set: RouteSet, epsilon: float, mode: str) -> tuple[float, float]:
    """``mode`` is ``"snf"`` or ``"fns"``."""
    if not route_set.routes:
        raise EmptySet("no routes")
    if mode == "snf":
        bound = (1 + epsilon) * min(r.length for r in route_set)
        return _minimal((r for r in route_set if leq(r.length, bound)), LexOrder.FS)
    if mode == "fns":
        bound = (1 + epsilon) * min(r.complexity for r in route_set)
        return _minimal((r for r in route_set if leq(r.complexity, bound)), LexOrder.SF)
    raise ValueError(f"unknown mode {mode!r}")


def oracle_route(route_set: RouteSet, problem: str, epsilon: float = 0.0) -> Route:
    """A route realising the oracle answer for ``problem`` in fs/sf/snf/fns."""
    if problem == "fs":
        cost = oracle_best(route_set, LexOrder.FS)
    elif problem == "sf":
        cost = oracle_best(route_set, LexOrder.SF)
    else:
        cost = oracle_near(route_set, epsilon, problem)
    order = LexOrder.FS if problem in ("fs", "snf") else LexOrder.SF
    for r in route_set:
        if compare(order, r.cost, cost) is Ordering.EQUAL:
            return r
    raise EmptySet("no routes")  # pragma: no cover
