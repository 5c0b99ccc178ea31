"""Text format for road networks and JSON-lines result records.

Network grammar, one directive per line, ``#`` starts a comment::

    node <id> [<x> <y>]
    road <id> oneway|twoway <node> <node> ...
    length <a> <b> <value>
    turncost <node> <road_i> <road_j> <value>
    turndefault <value>

Directives may appear in any order. Identifiers are whitespace-free strings.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .errors import (
    DanglingNodeRef,
    InvalidTurnCost,
    NetworkError,
    NetworkSyntaxError,
    NonPositiveLength,
    OrphanNode,
    OverlappingRoads,
    RoutingError,
)
from .model import RoadNetwork, build_network, close, route_complexity, route_length

SyntaxError = NetworkSyntaxError  # noqa: A001  - name used by callers of parse_network


def _float(token: str, lineno: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NetworkSyntaxError(f"{what} {token!r} is not a number", lineno) from None
    if not math.isfinite(value):
        raise NetworkSyntaxError(f"{what} must be finite", lineno)
    return value


def parse_network(text: str) -> RoadNetwork:
    node_lines: dict[str, int] = {}
    node_order: list[str] = []
    coords: list[tuple[float, float] | None] = []
    roads: list[tuple[str, bool, list[str], int]] = []
    lengths: list[tuple[str, str, float, int]] = []
    turns: list[tuple[str, str, str, float, int]] = []
    default_turn = 1.0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "node":
            if len(args) not in (1, 3):
                raise NetworkSyntaxError("expected: node <id> [<x> <y>]", lineno)
            if args[0] in node_lines:
                raise NetworkError(f"node {args[0]!r} declared twice (first at line {node_lines[args[0]]})", lineno)
            node_lines[args[0]] = lineno
            node_order.append(args[0])
            coords.append((_float(args[1], lineno, "x"), _float(args[2], lineno, "y")) if len(args) == 3 else None)
        elif head == "road":
            if len(args) < 2 or args[1] not in ("oneway", "twoway"):
                raise NetworkSyntaxError("expected: road <id> oneway|twoway <node> <node> ...", lineno)
            if any(r[0] == args[0] for r in roads):
                raise NetworkError(f"road {args[0]!r} declared twice", lineno)
            if len(args) < 4:
                raise NetworkError(f"road {args[0]} needs at least 2 nodes", lineno)
            roads.append((args[0], args[1] == "twoway", args[2:], lineno))
        elif head == "length":
            if len(args) != 3:
                raise NetworkSyntaxError("expected: length <a> <b> <value>", lineno)
            lengths.append((args[0], args[1], _float(args[2], lineno, "length"), lineno))
        elif head == "turncost":
            if len(args) != 4:
                raise NetworkSyntaxError("expected: turncost <node> <road_i> <road_j> <value>", lineno)
            turns.append((args[0], args[1], args[2], _float(args[3], lineno, "turn cost"), lineno))
        elif head == "turndefault":
            if len(args) != 1:
                raise NetworkSyntaxError("expected: turndefault <value>", lineno)
            default_turn = _float(args[0], lineno, "turn cost")
            if default_turn < 0:
                raise InvalidTurnCost("turn cost must be >= 0", lineno)
        else:
            raise NetworkSyntaxError(f"unknown directive {head!r}", lineno)

    index = {name: i for i, name in enumerate(node_order)}
    road_index: dict[str, int] = {}
    segments: dict[frozenset[str], str] = {}
    covered: set[str] = set()
    for rid, (name, _, seq, lineno) in enumerate(roads):
        for v in seq:
            if v not in index:
                raise DanglingNodeRef(f"road {name} references undeclared node {v!r}", lineno)
        if len(set(seq)) != len(seq):
            raise NetworkError(f"road {name} repeats a node", lineno)
        for a, b in zip(seq, seq[1:]):
            key = frozenset((a, b))
            if key in segments:
                raise OverlappingRoads(f"segment ({a}, {b}) already belongs to road {segments[key]}", lineno)
            segments[key] = name
        covered.update(seq)
        road_index[name] = rid
    for name in node_order:
        if name not in covered:
            raise OrphanNode(f"node {name} lies on no road", node_lines[name])
    if not roads:
        raise NetworkError("a network needs at least one road")

    seg_len: dict[tuple[int, int], float] = {}
    for a, b, value, lineno in lengths:
        for v in (a, b):
            if v not in index:
                raise DanglingNodeRef(f"undeclared node {v!r}", lineno)
        if frozenset((a, b)) not in segments:
            raise NetworkError(f"({a}, {b}) is not a road segment", lineno)
        if value <= 0:
            raise NonPositiveLength(f"length must be positive, got {value}", lineno)
        seg_len[(index[a], index[b])] = value

    overrides: dict[tuple[int, int, int], float] = {}
    for n, ri, rj, value, lineno in turns:
        if n not in index:
            raise DanglingNodeRef(f"undeclared node {n!r}", lineno)
        for r in (ri, rj):
            if r not in road_index:
                raise InvalidTurnCost(f"unknown road {r!r}", lineno)
            if n not in roads[road_index[r]][2]:
                raise InvalidTurnCost(f"node {n} is not on road {r}", lineno)
        if ri == rj:
            raise InvalidTurnCost(f"same-road turn cost override at {n} on {ri}", lineno)
        if value < 0:
            raise InvalidTurnCost("turn cost must be >= 0", lineno)
        overrides[(index[n], road_index[ri], road_index[rj])] = value

    return build_network(
        node_order,
        [(seq, bidir) for _, bidir, seq, _ in roads],
        seg_len,
        overrides,
        coords=coords,
        road_names=[r[0] for r in roads],
        default_turn_cost=default_turn,
    )


def _num(x: float) -> str:
    """Shortest text that parses back to exactly ``x``."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _ident(name: str) -> str:
    if not name or any(c.isspace() for c in name) or "#" in name:
        raise ValueError(f"identifier {name!r} cannot be written in the network format")
    return name


def write_network(net: RoadNetwork) -> str:
    lines = []
    for name, c in zip(net.names, net.coords):
        lines.append(f"node {_ident(name)}" if c is None else f"node {_ident(name)} {_num(c[0])} {_num(c[1])}")
    for road in net.roads:
        kind = "twoway" if road.bidirectional else "oneway"
        lines.append(f"road {_ident(road.name)} {kind} " + " ".join(net.names[v] for v in road.nodes))
    for road in net.roads:
        for a, b in road.segments():
            lines.append(f"length {net.names[a]} {net.names[b]} {_num(net.segment_lengths[(a, b)])}")
    if net.turn_costs.default_change != 1.0:
        lines.append(f"turndefault {_num(net.turn_costs.default_change)}")
    for (n, ri, rj), value in sorted(net.turn_costs.overrides.items()):
        lines.append(f"turncost {net.names[n]} {net.roads[ri].name} {net.roads[rj].name} {_num(value)}")
    return "\n".join(lines) + "\n"


@dataclass
class ResultRecord:
    problem: str
    algorithm: str
    epsilon: float
    source: str
    target: str
    length: float
    complexity: float
    route: list[str] = field(default_factory=list)
    routes_examined: int = 0
    elapsed_ms: float = 0.0


def _sig9(x: float) -> float | int:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise {x}")
    y = float(f"{x:.9g}")
    return int(y) if y == int(y) and abs(y) < 1e15 else y


def write_results(records: Iterable[ResultRecord]) -> str:
    lines = []
    for rec in records:
        obj = asdict(rec)
        for key in ("epsilon", "length", "complexity", "elapsed_ms"):
            obj[key] = _sig9(obj[key])
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def parse_results(text: str) -> list[ResultRecord]:
    out = []
    for line in text.splitlines():
        if line.strip():
            obj = json.loads(line)
            for key in ("epsilon", "length", "complexity", "elapsed_ms"):
                obj[key] = float(obj[key])
            out.append(ResultRecord(**obj))
    return out


def validate_record(net: RoadNetwork, rec: ResultRecord) -> bool:
    """True when the record's route exists in ``net`` and its costs recompute."""
    try:
        nodes = [net.node(v) for v in rec.route]
        if not nodes or nodes[0] != net.node(rec.source) or nodes[-1] != net.node(rec.target):
            return False
        return close(route_length(net, nodes), rec.length) and close(route_complexity(net, nodes), rec.complexity)
    except RoutingError:
        return False
