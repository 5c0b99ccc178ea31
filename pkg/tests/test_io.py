from __future__ import annotations

import pytest

from turnroute.errors import (
    DanglingNodeRef,
    InvalidTurnCost,
    NetworkError,
    NetworkSyntaxError,
    NonPositiveLength,
    OrphanNode,
    OverlappingRoads,
)
from turnroute.io import ResultRecord, parse_network, parse_results, validate_record, write_network, write_results
from turnroute.model import LexOrder, build_network
from turnroute.oracle import enumerate_simple_routes, oracle_best, oracle_near
from turnroute.synth import compose, default_template, fixture_table1, gen_grid_backbone, gen_ring_backbone

SMALL = """\
node a 0 0
node b 3 4
road r0 twoway a b
"""


def test_minimal_file():
    net = parse_network(SMALL)
    assert net.node_count == 2 and net.edge_count == 2
    assert net.edge_length(0, 1) == 5.0


def test_defaults_without_coordinates():
    net = parse_network("node a\nnode b\nroad r oneway a b\n")
    assert net.edge_count == 1 and net.edge_length(0, 1) == 1.0


def test_comments_and_blank_lines():
    text = "# a network\n\nnode a  # first\nnode b\nroad r twoway a b # the only road\nlength b a 2.5\n"
    net = parse_network(text)
    assert net.edge_length(0, 1) == 2.5


def test_directives_in_any_order():
    text = "length a b 2\nroad r twoway a b\nnode b\nnode a\n"
    net = parse_network(text)
    assert net.names == ("b", "a") and net.edge_length(1, 0) == 2


def test_fixture_round_trip_keeps_answers():
    net, s, t = fixture_table1()
    back = parse_network(write_network(net))
    assert back == net
    rs = enumerate_simple_routes(back, back.node("s"), back.node("t"))
    assert oracle_best(rs, LexOrder.FS) == (40, 1)
    assert oracle_best(rs, LexOrder.SF) == (10, 4)
    assert oracle_near(rs, 1, "snf") == (20, 3)


def test_overlapping_roads_reported_at_second_road():
    text = "node a\nnode b\nroad r0 twoway a b\nroad r1 twoway a b\n"
    with pytest.raises(OverlappingRoads) as err:
        parse_network(text)
    assert err.value.line == 4


@pytest.mark.parametrize(
    "text,error,line",
    [
        ("node a\nnode b\nroad r0 twoway a c\n", DanglingNodeRef, 3),
        ("node a\nnode b\nnode c\nroad r0 twoway a b\n", OrphanNode, 3),
        ("node a\nnode b\nroad r0 twoway a b\nlength a b -1\n", NonPositiveLength, 4),
        ("node a\nnode b\nroad r0 twoway a b\nlength a b x\n", NetworkSyntaxError, 4),
        ("node a\nnode b\nroad r0 sideways a b\n", NetworkSyntaxError, 3),
        ("node a\nbogus\n", NetworkSyntaxError, 2),
        ("node a 1\n", NetworkSyntaxError, 1),
        ("node a\nnode a\n", NetworkError, 2),
        ("node a\nnode b\nroad r0 twoway a b\nturncost a r0 r0 2\n", InvalidTurnCost, 4),
        ("node a\nnode b\nroad r0 twoway a b\nturncost a r0 r9 2\n", InvalidTurnCost, 4),
        ("node a\nnode b\nnode c\nroad r0 twoway a b\nroad r1 twoway b c\nturncost c r0 r1 2\n", InvalidTurnCost, 6),
        ("node a\nnode b\nnode c\nroad r0 twoway a b\nroad r1 twoway b c\nturncost b r0 r1 -2\n", InvalidTurnCost, 6),
        ("node a\nnode b\nroad r0 twoway a b\nlength a c 1\n", DanglingNodeRef, 4),
        ("node a\nnode b\nnode c\nroad r0 twoway a b c\nlength a c 1\n", NetworkError, 5),
        ("node a\nnode b\nroad r0 twoway a b a\n", NetworkError, 3),
        ("node a\nroad r0 twoway a\n", NetworkError, 2),
    ],
)
def test_errors_carry_line_numbers(text, error, line):
    with pytest.raises(error) as err:
        parse_network(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_turn_costs_round_trip():
    text = (
        "node a\nnode b\nnode c\nroad r0 oneway a b\nroad r1 oneway b c\n"
        "turndefault 1.5\nturncost b r0 r1 0.25\n"
    )
    net = parse_network(text)
    assert net.turn_costs.cost(1, 0, 1) == 0.25
    assert net.turn_costs.default_change == 1.5
    assert parse_network(write_network(net)) == net


def generated():
    template, entrances = default_template()
    return [
        gen_grid_backbone(2).network,
        gen_ring_backbone(3).network,
        compose(gen_grid_backbone(3), template, entrances, 7),
        compose(gen_ring_backbone(2), template, entrances, 7),
    ]


@pytest.mark.parametrize("net", [fixture_table1()[0], *generated()])
def test_write_parse_write_idempotent(net):
    text = write_network(net)
    again = parse_network(text)
    assert again == net
    assert write_network(again) == text


def test_grid_tau2_has_four_road_lines():
    text = write_network(gen_grid_backbone(2).network)
    assert sum(line.startswith("road ") for line in text.splitlines()) == 4


def test_writer_rejects_unwritable_names():
    net = build_network(["a b", "c"], [["a b", "c"]])
    with pytest.raises(ValueError):
        write_network(net)


@pytest.mark.parametrize("net", [fixture_table1()[0], gen_grid_backbone(3).network])
def test_deleting_any_referenced_node_is_rejected(net):
    lines = write_network(net).splitlines()
    node_lines = [i for i, line in enumerate(lines) if line.startswith("node ")]
    for i in node_lines:
        mutated = "\n".join(lines[:i] + lines[i + 1 :])
        with pytest.raises(NetworkError):
            parse_network(mutated)


def fs_record() -> ResultRecord:
    return ResultRecord("fs", "fs", 0.0, "s", "t", 40.0, 1.0, ["s", "n6", "n8", "n11", "n10", "t"], 15, 0.123456789012)


def test_results_line_format():
    line = write_results([fs_record()])
    assert line.endswith("\n") and line.count("\n") == 1
    assert '"length":40' in line and '"complexity":1' in line
    assert '"elapsed_ms":0.123456789' in line
    assert list(parse_results(line)[0].__dict__) == [
        "problem", "algorithm", "epsilon", "source", "target",
        "length", "complexity", "route", "routes_examined", "elapsed_ms",
    ]


def test_empty_batch():
    assert write_results([]) == ""
    assert parse_results("") == []


def test_results_round_trip():
    records = [
        ResultRecord("snf", "snf-astar", 0.1, "a", "b", 12.5, 3.0, ["a", "x", "b"], 7, 1.25),
        ResultRecord("fns", "fns-dfs", 1.0, "b", "a", 1 / 3, 2.0, ["b", "a"], 2, 0.0),
        ResultRecord("sf", "sf", 0.0, "a", "a", 0.0, 0.0, ["a"], 1, 3.5),
    ]
    text = write_results(records)
    back = parse_results(text)
    assert len(text.splitlines()) == 3
    assert back[0] == records[0] and back[2] == records[2]
    assert back[1].length == pytest.approx(1 / 3, rel=1e-9)
    assert write_results(back) == text


def test_validate_record():
    net, _, _ = fixture_table1()
    assert validate_record(net, fs_record())
    bad = fs_record()
    bad.complexity = 2.0
    assert not validate_record(net, bad)
    bad = fs_record()
    bad.route = ["s", "t"]
    assert not validate_record(net, bad)
