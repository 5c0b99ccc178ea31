"""Simplest near-fastest (SNF) and fastest near-simplest (FNS) routing.

Both problems are solved by route enumeration with pruning, either
depth-first or best-first (A*). The two problems mirror each other: SNF
bounds length and minimises complexity first, FNS bounds complexity and
minimises length first. One engine per traversal serves both through
:class:`_Problem`.

Incumbents are compared in the full lexicographic order of the problem, so
among equally simple near-fastest routes the shortest one is returned (and
symmetrically for FNS).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import EpsilonNegative, Unreachable
from .model import LexOrder, RoadNetwork, Route, leq, lex_less, lt, make_route
from .optimal import CostArrays, cost_arrays, dijkstra_fastest, fastest_simplest

INF = math.inf


@dataclass
class NearAnswer:
    length: float
    complexity: float
    route: Route
    routes_examined: int = 0
    incumbent_updates: int = 0
    pruned_by_length: int = 0
    pruned_by_complexity: int = 0
    pruned_by_dominance: int = 0
    early_exit: bool = False
    notes: tuple[str, ...] = ()


@dataclass
class SearchMarks:
    """DFS bookkeeping: ``in_route`` per node, ``traversed`` per outgoing edge slot."""

    in_route: list[bool]
    traversed: list[list[bool]]

    @classmethod
    def for_network(cls, net: RoadNetwork) -> SearchMarks:
        return cls([False] * net.node_count, [[False] * len(es) for es in net.out_edges])

    def clean(self) -> bool:
        return not any(self.in_route) and not any(any(t) for t in self.traversed)


def dominates(a: tuple[float, float], b: tuple[float, float], cmax: float) -> bool:
    """True if partial route ``a`` makes ``b`` useless: ``b`` is longer and more complex by over ``cmax``."""
    return lt(a[0], b[0]) and lt(a[1] + cmax, b[1])


@dataclass
class _Problem:
    snf: bool
    order: LexOrder
    arrays: CostArrays
    threshold: float
    cmax: float
    use_bounds: bool

    def feasible(self, length: float, cpl: float) -> bool:
        return leq(length if self.snf else cpl, self.threshold)

    def within_threshold(self, length: float, cpl: float, y: int) -> bool:
        a = self.arrays
        if self.snf:
            return leq(length + a.sfL[y], self.threshold)
        return leq(cpl + a.fsC[y], self.threshold)

    def lower_bound(self, length: float, cpl: float, y: int) -> tuple[float, float]:
        a = self.arrays
        if self.snf:
            return (length + a.sfL[y], cpl + a.fsC[y])
        return (length + a.sfL[y], cpl + a.sfC[y])

    def candidate(self, length: float, cpl: float, y: int) -> tuple[float, float] | None:
        """Cost bound of finishing via the stored optimal route from ``y``, if feasible."""
        a = self.arrays
        if self.snf:
            if leq(length + a.fsL[y], self.threshold):
                return (length + a.fsL[y], cpl + self.cmax + a.fsC[y])
            return None
        c = cpl + self.cmax + a.sfC[y]
        if leq(c, self.threshold):
            return (length + a.sfL[y], c)
        return None

    def completion(self, y: int) -> list[int]:
        if self.snf:
            return self.arrays.fs_route_from(y)
        return self.arrays.sf_route_from(y)

    def heap_key(self, length: float, cpl: float, y: int) -> tuple[float, float]:
        a = self.arrays
        if self.snf:
            return (cpl + a.fsC[y], length + a.fsL[y])
        return (length + a.sfL[y], cpl + a.sfC[y])


@dataclass
class _Incumbent:
    cost: tuple[float, float] = (INF, INF)
    witness: Callable[[], list[int]] | None = None
    updates: int = 0


@dataclass
class _Setup:
    problem: _Problem
    incumbent: _Incumbent
    answer: NearAnswer | None = None
    notes: list[str] = field(default_factory=list)


def _setup(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    epsilon: float,
    use_bounds: bool,
    snf: bool,
    arrays: CostArrays | None,
) -> _Setup:
    if not epsilon >= 0:
        raise EpsilonNegative(f"epsilon must be >= 0, got {epsilon}")
    order = LexOrder.FS if snf else LexOrder.SF
    notes: list[str] = []
    if use_bounds:
        a = arrays if arrays is not None and arrays.target == n_t else cost_arrays(net, n_t)
        if math.isinf(a.sfL[n_s]):
            raise Unreachable(f"{net.names[n_t]} is not reachable from {net.names[n_s]}")
        threshold = (1 + epsilon) * (a.sfL[n_s] if snf else a.fsC[n_s])
    else:
        a = CostArrays.zeros(net.node_count, n_t)
        if snf:
            threshold = (1 + epsilon) * dijkstra_fastest(net, n_s, n_t)
        else:
            threshold = (1 + epsilon) * fastest_simplest(net, n_s, n_t).complexity
    if not snf and threshold == 0:
        notes.append("simplest route has complexity 0; only complexity-0 routes qualify")
    problem = _Problem(snf, order, a, threshold, net.cmax, use_bounds)
    inc = _Incumbent()
    setup = _Setup(problem, inc, notes=notes)
    if not use_bounds:
        return setup

    if snf and leq(a.fsL[n_s], threshold):
        route = make_route(net, a.fs_route_from(n_s))
        setup.answer = NearAnswer(route.length, route.complexity, route, early_exit=True, notes=tuple(notes))
    elif not snf and leq(a.sfC[n_s], threshold):
        route = make_route(net, a.sf_route_from(n_s))
        setup.answer = NearAnswer(route.length, route.complexity, route, early_exit=True, notes=tuple(notes))
    elif snf:
        inc.cost = (a.sfL[n_s], a.sfC[n_s])
        inc.witness = lambda: a.sf_route_from(n_s)
    else:
        inc.cost = (a.fsL[n_s], a.fsC[n_s])
        inc.witness = lambda: a.fs_route_from(n_s)
    return setup


def _finish(net: RoadNetwork, setup: _Setup, stats: NearAnswer) -> NearAnswer:
    inc = setup.incumbent
    if inc.witness is None:
        # only possible with non-uniform turn costs, where the threshold may
        # come from a non-simple walk that no simple route matches
        raise Unreachable("no simple route meets the near-optimality threshold")
    route = make_route(net, inc.witness())
    stats.length, stats.complexity, stats.route = route.length, route.complexity, route
    stats.incumbent_updates = inc.updates
    stats.notes = tuple(setup.notes)
    return stats


def _empty_stats() -> NearAnswer:
    return NearAnswer(INF, INF, Route((), INF, INF))


def _dfs(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    setup: _Setup,
    *,
    prune_threshold: bool,
    prune_incumbent: bool,
    tighten: bool,
    marks: SearchMarks | None,
) -> NearAnswer:
    prob, inc = setup.problem, setup.incumbent
    order = prob.order
    table = net.turn_costs
    out_edges = net.out_edges
    tighten = tighten and prob.use_bounds
    marks = marks or SearchMarks.for_network(net)
    in_route, traversed = marks.in_route, marks.traversed
    stats = _empty_stats()
    threshold_pruned = incumbent_pruned = 0

    # entries: (node, length, complexity, prev_node, arrival road)
    stack: list[tuple[int, float, float, int | None, int | None]] = [(n_s, 0.0, 0.0, None, None)]
    pushes = 1
    while stack:
        x, length, cpl, _, road = stack[-1]
        if not in_route[x]:
            if prune_incumbent and not lex_less(order, prob.lower_bound(length, cpl, x), inc.cost):
                incumbent_pruned += 1
                stack.pop()
            elif x == n_t:
                if prob.feasible(length, cpl) and lex_less(order, (length, cpl), inc.cost):
                    nodes = [entry[0] for entry in stack]
                    inc.cost, inc.witness = (length, cpl), (lambda nodes=nodes: nodes)
                    inc.updates += 1
                stack.pop()
            else:
                in_route[x] = True
            continue

        marks_x = traversed[x]
        edges = out_edges[x]
        slot = -1
        for i, e in enumerate(edges):
            if not marks_x[i] and not in_route[e.head]:
                slot = i
                break
        if slot < 0:
            stack.pop()
            in_route[x] = False
            for i in range(len(marks_x)):
                marks_x[i] = False
            continue

        marks_x[slot] = True
        e = edges[slot]
        y = e.head
        nl = length + e.length
        nc = cpl if road is None or road == e.road else cpl + table.cost(x, road, e.road)
        if prune_threshold and not prob.within_threshold(nl, nc, y):
            threshold_pruned += 1
            continue
        if prune_incumbent and not lex_less(order, prob.lower_bound(nl, nc, y), inc.cost):
            incumbent_pruned += 1
            continue
        if tighten:
            cand = prob.candidate(nl, nc, y)
            if cand is not None and lex_less(order, cand, inc.cost):
                prefix = [entry[0] for entry in stack]
                inc.cost = cand
                inc.witness = lambda prefix=prefix, y=y: prefix + prob.completion(y)
                inc.updates += 1
        stack.append((y, nl, nc, x, e.road))
        pushes += 1

    stats.routes_examined = pushes
    _assign_prunes(stats, prob.snf, threshold_pruned, incumbent_pruned)
    return _finish(net, setup, stats)


def _assign_prunes(stats: NearAnswer, snf: bool, threshold_pruned: int, incumbent_pruned: int) -> None:
    if snf:
        stats.pruned_by_length, stats.pruned_by_complexity = threshold_pruned, incumbent_pruned
    else:
        stats.pruned_by_length, stats.pruned_by_complexity = incumbent_pruned, threshold_pruned


class _ALabel:
    __slots__ = ("node", "length", "complexity", "road", "parent", "mask", "alive")

    def __init__(self, node, length, complexity, road, parent, mask):
        self.node = node
        self.length = length
        self.complexity = complexity
        self.road = road
        self.parent = parent
        self.mask = mask
        self.alive = True

    def nodes(self) -> list[int]:
        out = []
        lab = self
        while lab is not None:
            out.append(lab.node)
            lab = lab.parent
        return out[::-1]


def _astar(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    setup: _Setup,
    *,
    prune_threshold: bool,
    prune_incumbent: bool,
    tighten: bool,
    dominance: bool,
    no_revisit: bool,
) -> NearAnswer:
    prob, inc = setup.problem, setup.incumbent
    order = prob.order
    table = net.turn_costs
    out_edges = net.out_edges
    cmax = prob.cmax
    tighten = tighten and prob.use_bounds
    stats = _empty_stats()
    threshold_pruned = incumbent_pruned = dominance_pruned = 0
    label_sets: list[list[_ALabel]] = [[] for _ in range(net.node_count)]

    start = _ALabel(n_s, 0.0, 0.0, None, None, 1 << n_s)
    label_sets[n_s].append(start)
    seq = 0
    heap = [(*prob.heap_key(0.0, 0.0, n_s), n_s, seq, start)]
    deheaps = 0
    while heap:
        k1, k2, x, _, lab = heapq.heappop(heap)
        if not lab.alive:
            continue
        deheaps += 1
        key_cost = (k2, k1) if prob.snf else (k1, k2)
        if not lex_less(order, key_cost, inc.cost):
            break  # every remaining label completes no better than the incumbent
        if x == n_t:
            if prob.feasible(lab.length, lab.complexity):
                inc.cost, inc.witness = (lab.length, lab.complexity), lab.nodes
                inc.updates += 1
                break
            continue
        for e in out_edges[x]:
            y = e.head
            if no_revisit and lab.mask >> y & 1:
                continue
            nl = lab.length + e.length
            road = lab.road
            nc = lab.complexity if road is None or road == e.road else lab.complexity + table.cost(x, road, e.road)
            if dominance:
                pruned = False
                bucket = label_sets[y]
                keep = []
                for other in bucket:
                    if dominates((nl, nc), (other.length, other.complexity), cmax):
                        other.alive = False
                    else:
                        keep.append(other)
                        if not pruned and dominates((other.length, other.complexity), (nl, nc), cmax):
                            pruned = True
                if len(keep) != len(bucket):
                    label_sets[y] = keep
                if pruned:
                    dominance_pruned += 1
                    continue
            if prune_threshold and not prob.within_threshold(nl, nc, y):
                threshold_pruned += 1
                continue
            if prune_incumbent and not lex_less(order, prob.lower_bound(nl, nc, y), inc.cost):
                incumbent_pruned += 1
                continue
            new = _ALabel(y, nl, nc, e.road, lab, lab.mask | (1 << y))
            if tighten:
                cand = prob.candidate(nl, nc, y)
                if cand is not None and lex_less(order, cand, inc.cost):
                    inc.cost = cand
                    inc.witness = lambda new=new, y=y: new.nodes() + prob.completion(y)[1:]
                    inc.updates += 1
            label_sets[y].append(new)
            seq += 1
            heapq.heappush(heap, (*prob.heap_key(nl, nc, y), y, seq, new))

    stats.routes_examined = deheaps
    stats.pruned_by_dominance = dominance_pruned
    _assign_prunes(stats, prob.snf, threshold_pruned, incumbent_pruned)
    return _finish(net, setup, stats)


def _run_dfs(net, n_s, n_t, epsilon, use_bounds, snf, arrays, marks, threshold, incumbent, tighten):
    setup = _setup(net, n_s, n_t, epsilon, use_bounds, snf, arrays)
    if setup.answer is not None:
        return setup.answer
    return _dfs(
        net, n_s, n_t, setup,
        prune_threshold=threshold, prune_incumbent=incumbent, tighten=tighten, marks=marks,
    )


def _run_astar(net, n_s, n_t, epsilon, use_bounds, snf, arrays, threshold, incumbent, tighten, dominance, no_revisit):
    setup = _setup(net, n_s, n_t, epsilon, use_bounds, snf, arrays)
    if setup.answer is not None:
        return setup.answer
    return _astar(
        net, n_s, n_t, setup,
        prune_threshold=threshold, prune_incumbent=incumbent, tighten=tighten,
        dominance=dominance, no_revisit=no_revisit,
    )


def snf_dfs(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    epsilon: float,
    use_bounds: bool = True,
    *,
    prune_length: bool = True,
    prune_complexity: bool = True,
    upper_bound: bool = True,
    arrays: CostArrays | None = None,
    marks: SearchMarks | None = None,
) -> NearAnswer:
    """Simplest route whose length is within ``(1 + epsilon)`` of the fastest, by DFS.

    ``use_bounds=False`` runs without the per-node cost arrays: only the
    fastest length itself is computed, for the feasibility threshold.
    """
    return _run_dfs(net, n_s, n_t, epsilon, use_bounds, True, arrays, marks,
                    prune_length, prune_complexity, upper_bound)


def fns_dfs(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    epsilon: float,
    use_bounds: bool = True,
    *,
    prune_length: bool = True,
    prune_complexity: bool = True,
    upper_bound: bool = True,
    arrays: CostArrays | None = None,
    marks: SearchMarks | None = None,
) -> NearAnswer:
    """Fastest route whose complexity is within ``(1 + epsilon)`` of the simplest, by DFS."""
    return _run_dfs(net, n_s, n_t, epsilon, use_bounds, False, arrays, marks,
                    prune_complexity, prune_length, upper_bound)


def snf_astar(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    epsilon: float,
    use_bounds: bool = True,
    *,
    dominance: bool = True,
    no_revisit: bool = True,
    prune_length: bool = True,
    prune_complexity: bool = True,
    upper_bound: bool = True,
    arrays: CostArrays | None = None,
) -> NearAnswer:
    """Best-first variant of :func:`snf_dfs` with label dominance.

    ``no_revisit`` drops extensions that return to a node already on the
    partial route; turn it off to allow cyclic labels.
    """
    return _run_astar(net, n_s, n_t, epsilon, use_bounds, True, arrays,
                      prune_length, prune_complexity, upper_bound, dominance, no_revisit)


def fns_astar(
    net: RoadNetwork,
    n_s: int,
    n_t: int,
    epsilon: float,
    use_bounds: bool = True,
    *,
    dominance: bool = True,
    no_revisit: bool = True,
    prune_length: bool = True,
    prune_complexity: bool = True,
    upper_bound: bool = True,
    arrays: CostArrays | None = None,
) -> NearAnswer:
    return _run_astar(net, n_s, n_t, epsilon, use_bounds, False, arrays,
                      prune_complexity, prune_length, upper_bound, dominance, no_revisit)
