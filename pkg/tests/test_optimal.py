from __future__ import annotations

import itertools
import math

import pytest
from support import per_node_fastest_simplest, random_corpus, reference, same_cost

from turnroute.errors import Unreachable, UnsupportedCostTable
from turnroute.model import build_network, make_route
from turnroute.optimal import (
    _along,
    all_fastest_simplest,
    all_simplest_fastest,
    bsl_fastest_simplest,
    cost_arrays,
    dijkstra_fastest,
    fastest_simplest,
    intersection_graph,
    realize_road_sequence,
    simplest_fastest,
)
from turnroute.synth import fixture_table1

CORPUS = random_corpus(60, seed=11)


def test_fixture_fastest_simplest():
    net, s, t = fixture_table1()
    ans = fastest_simplest(net, s, t)
    assert (ans.length, ans.complexity) == (40, 1)
    assert [net.names[v] for v in ans.route.nodes] == ["s", "n6", "n8", "n11", "n10", "t"]
    assert ans.chain[0].prev is None and ans.chain[-1].node == t


def test_fixture_simplest_fastest():
    net, s, t = fixture_table1()
    ans = simplest_fastest(net, s, t)
    assert (ans.length, ans.complexity) == (10, 4)
    assert ans.route.cost == (10, 4)


def test_junction_labels_kept_per_road():
    # both sub-routes into n11 cost (20, 1) but arrive on different roads
    net, s, _ = fixture_table1()
    tree = all_fastest_simplest(net, s)
    n11 = net.node("n11")
    at_n11 = {road: (lab.length, lab.complexity) for (node, road), lab in tree.labels.items() if node == n11 and lab.final}
    ra, rc = 0, 2
    assert at_n11[ra] == (20, 1)
    assert at_n11[rc] == (20, 1)


def test_per_node_labels_are_wrong_on_fixture():
    net, s, t = fixture_table1()
    assert per_node_fastest_simplest(net, s, t)[1] > 1
    assert fastest_simplest(net, s, t).complexity == 1


def test_source_equals_target():
    net, s, _ = fixture_table1()
    ans = fastest_simplest(net, s, s)
    assert (ans.length, ans.complexity, ans.route.nodes) == (0, 0, (s,))


def test_unreachable_raises():
    net = build_network(["a", "b", "c"], [(["a", "b", "c"], False)])
    with pytest.raises(Unreachable):
        fastest_simplest(net, 2, 0)
    with pytest.raises(Unreachable):
        simplest_fastest(net, 2, 0)
    with pytest.raises(Unreachable):
        bsl_fastest_simplest(net, 2, 0)
    with pytest.raises(Unreachable):
        dijkstra_fastest(net, 2, 0)


def test_deheap_keys_non_decreasing():
    net, s, t = fixture_table1()
    for fn in (fastest_simplest, simplest_fastest):
        trace: list[tuple[float, float]] = []
        fn(net, s, t, trace=trace)
        assert trace == sorted(trace)


def test_cost_arrays_on_fixture():
    net, s, t = fixture_table1()
    arr = cost_arrays(net, t)
    assert (arr.fsL[s], arr.fsC[s]) == (40, 1)
    assert (arr.sfL[s], arr.sfC[s]) == (10, 4)
    assert arr.fsL[t] == arr.fsC[t] == 0
    route = make_route(net, arr.fs_route_from(s))
    assert route.cost == (40, 1)


@pytest.mark.parametrize("idx", range(0, 60, 6))
def test_all_star_matches_single_pair(idx):
    net, s, _ = CORPUS[idx]
    fs_tree = all_fastest_simplest(net, s)
    sf_tree = all_simplest_fastest(net, s)
    for t in range(net.node_count):
        a = fastest_simplest(net, s, t)
        b = simplest_fastest(net, s, t)
        assert same_cost((fs_tree.length[t], fs_tree.complexity[t]), (a.length, a.complexity))
        assert same_cost((sf_tree.length[t], sf_tree.complexity[t]), (b.length, b.complexity))


@pytest.mark.parametrize("idx", range(0, 60, 4))
def test_array_orderings(idx):
    net, _, t = CORPUS[idx]
    arr = cost_arrays(net, t)
    for n in range(net.node_count):
        assert arr.sfL[n] <= arr.fsL[n] + 1e-9
        assert arr.fsC[n] <= arr.sfC[n] + 1e-9


def test_all_star_unreachable_is_infinite():
    net = build_network(["a", "b", "c"], [(["a", "b", "c"], False)])
    tree = all_fastest_simplest(net, 2)
    assert math.isinf(tree.length[0]) and math.isinf(tree.complexity[0])


@pytest.mark.parametrize("idx", range(60))
def test_exact_methods_match_brute_force(idx):
    net, s, t = CORPUS[idx]
    ref = reference(net, s, t)
    fs = fastest_simplest(net, s, t)
    sf = simplest_fastest(net, s, t)
    bsl = bsl_fastest_simplest(net, s, t)
    assert same_cost((fs.length, fs.complexity), ref.fs)
    assert same_cost((sf.length, sf.complexity), ref.sf)
    assert same_cost((bsl.length, bsl.complexity), ref.fs)
    assert same_cost(bsl.route.cost, ref.fs)
    assert math.isclose(dijkstra_fastest(net, s, t), ref.sf[0], rel_tol=1e-9)


def test_bsl_fixture_and_counter():
    net, s, t = fixture_table1()
    ans = bsl_fastest_simplest(net, s, t)
    assert (ans.length, ans.complexity) == (40, 1)
    assert ans.road_sequences_enumerated >= 1


def test_bsl_same_road():
    net, _, _ = fixture_table1()
    ans = bsl_fastest_simplest(net, net.node("n6"), net.node("n10"))
    assert (ans.length, ans.complexity) == (25, 0)
    assert [net.names[v] for v in ans.route.nodes] == ["n6", "n8", "n11", "n10"]


def test_bsl_rejects_non_uniform_costs():
    net = build_network(["a", "b", "c"], [["a", "b"], ["b", "c"]], turn_costs={("b", 0, 1): 2.0})
    with pytest.raises(UnsupportedCostTable):
        bsl_fastest_simplest(net, 0, 2)


def test_intersection_graph_fixture():
    net, _, _ = fixture_table1()
    adj = intersection_graph(net)
    ra, rb, rc, rd, re, rf, rg = range(7)
    assert set(adj[ra]) == {rc, rd, rf, rg}
    assert set(adj[re]) == {rd, rg}


def test_realize_single_road():
    net, _, _ = fixture_table1()
    route = realize_road_sequence(net, [0], net.node("n6"), net.node("t"))
    assert route is not None and route.length == 35 and route.complexity == 0


def test_realize_crossing_roads():
    net = build_network(["a", "c", "b", "d", "e"], [["a", "c", "b"], ["d", "c", "e"]])
    route = realize_road_sequence(net, [0, 1], net.node("a"), net.node("e"))
    assert route is not None and [net.names[v] for v in route.nodes] == ["a", "c", "e"]


def test_realize_respects_one_way():
    net = build_network(["a", "b", "c"], [(["a", "b"], False), (["c", "b"], False)])
    assert realize_road_sequence(net, [0, 1], 0, 2) is None


def _two_junction_network():
    # roads r0: a-j1-j2-b and r1: c-j1-x-j2-d share junctions j1 and j2
    names = ["a", "j1", "j2", "b", "c", "x", "d"]
    roads = [["a", "j1", "j2", "b"], ["c", "j1", "x", "j2", "d"]]
    lengths = {("a", "j1"): 1, ("j1", "j2"): 10, ("j2", "b"): 1, ("c", "j1"): 1, ("j1", "x"): 2, ("x", "j2"): 2, ("j2", "d"): 1}
    return build_network(names, roads, lengths)


def test_realize_picks_shorter_junction():
    net = _two_junction_network()
    s, t = net.node("a"), net.node("d")
    route = realize_road_sequence(net, [0, 1], s, t)
    # brute force over junction choices
    best = math.inf
    for j in sorted(set(net.roads[0].nodes) & set(net.roads[1].nodes)):
        first = _along(net, 0, s, j)
        second = _along(net, 1, j, t)
        if first and second and j not in (s, t):
            best = min(best, first[0] + second[0])
    assert route is not None and route.length == best == 6
    assert [net.names[v] for v in route.nodes] == ["a", "j1", "x", "j2", "d"]


def test_realize_matches_exhaustive_junction_choice_on_fixture():
    net, s, t = fixture_table1()
    roads = range(len(net.roads))
    for seq in itertools.product(roads, repeat=3):
        if seq[0] == seq[1] or seq[1] == seq[2]:
            continue
        route = realize_road_sequence(net, list(seq), s, t)
        best = math.inf
        j1s = set(net.roads[seq[0]].nodes) & set(net.roads[seq[1]].nodes)
        j2s = set(net.roads[seq[1]].nodes) & set(net.roads[seq[2]].nodes)
        for j1, j2 in itertools.product(j1s, j2s):
            legs = [_along(net, seq[0], s, j1) if s in net.roads[seq[0]].nodes else None,
                    _along(net, seq[1], j1, j2),
                    _along(net, seq[2], j2, t) if t in net.roads[seq[2]].nodes else None]
            if all(leg is not None for leg in legs) and s != j1 and j1 != j2 and j2 != t:
                best = min(best, sum(leg[0] for leg in legs))
        if math.isinf(best):
            assert route is None
        else:
            assert route is not None and route.length == best
