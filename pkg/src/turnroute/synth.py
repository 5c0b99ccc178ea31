"""Synthetic road networks: grid and ring backbones, neighbourhood templates,
the hand-built seven-road example network, and small random networks."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import IncompatibleTemplate, TauTooSmall
from .model import RoadNetwork, build_network, is_strongly_connected


@dataclass(frozen=True)
class Side:
    """Backbone segment ``a``-``b`` (consecutive on ``road``) bounding a slot."""

    a: int
    b: int
    road: int


@dataclass(frozen=True)
class Slot:
    sides: tuple[Side, ...]
    center: tuple[float, float]
    radius: float


@dataclass
class Backbone:
    topology: str
    tau: int
    network: RoadNetwork
    slots: list[Slot] = field(default_factory=list)

    @property
    def road_count(self) -> int:
        return len(self.network.roads)

    @property
    def intersection_count(self) -> int:
        return len(self.network.intersections())

    @property
    def slot_count(self) -> int:
        return len(self.slots)

    def summary(self) -> str:
        return f"{self.road_count} roads, {self.intersection_count} intersections, {self.slot_count} neighborhoods"


def gen_grid_backbone(tau: int, spacing: float = 100.0) -> Backbone:
    """``tau`` horizontal and ``tau`` vertical two-way roads crossing in a square grid."""
    if tau < 2:
        raise TauTooSmall(f"grid backbone needs tau >= 2, got {tau}")

    def idx(i: int, j: int) -> int:
        return i * tau + j

    names = [f"g{i}_{j}" for i in range(tau) for j in range(tau)]
    coords = [(j * spacing, i * spacing) for i in range(tau) for j in range(tau)]
    roads = [[idx(i, j) for j in range(tau)] for i in range(tau)]
    roads += [[idx(i, j) for i in range(tau)] for j in range(tau)]
    road_names = [f"h{i}" for i in range(tau)] + [f"v{j}" for j in range(tau)]
    net = build_network(names, roads, coords=coords, road_names=road_names)
    slots = []
    for i in range(tau - 1):
        for j in range(tau - 1):
            sides = (
                Side(idx(i, j), idx(i, j + 1), i),
                Side(idx(i + 1, j), idx(i + 1, j + 1), i + 1),
                Side(idx(i, j), idx(i + 1, j), tau + j),
                Side(idx(i, j + 1), idx(i + 1, j + 1), tau + j + 1),
            )
            center = ((j + 0.5) * spacing, (i + 0.5) * spacing)
            slots.append(Slot(sides, center, 0.3 * spacing))
    return Backbone("grid", tau, net, slots)


_DIRS = ("N", "E", "S", "W")
_UNIT = {"N": (0.0, 1.0), "E": (1.0, 0.0), "S": (0.0, -1.0), "W": (-1.0, 0.0)}


def gen_ring_backbone(tau: int, spacing: float = 100.0) -> Backbone:
    """``tau`` concentric diamond rings crossed by four radial roads.

    Each ring is split into four quarter roads between consecutive radials,
    and each radial runs from the innermost ring out to a terminal node
    beyond the outermost ring, giving 4(tau+1) roads and 4*tau intersections.
    """
    if tau < 1:
        raise TauTooSmall(f"ring backbone needs tau >= 1, got {tau}")
    names: list[str] = []
    coords: list[tuple[float, float]] = []
    at: dict[tuple[str, int], int] = {}
    for d in _DIRS:
        ux, uy = _UNIT[d]
        for k in range(1, tau + 2):
            at[(d, k)] = len(names)
            names.append(f"{d}{k}" if k <= tau else f"{d}end")
            coords.append((ux * k * spacing, uy * k * spacing))
    roads: list[list[int]] = []
    road_names: list[str] = []
    arc_id: dict[tuple[int, str], int] = {}
    for k in range(1, tau + 1):
        for q, d in enumerate(_DIRS):
            nd = _DIRS[(q + 1) % 4]
            arc_id[(k, d)] = len(roads)
            roads.append([at[(d, k)], at[(nd, k)]])
            road_names.append(f"ring{k}_{d}{nd}")
    radial_id = {}
    for d in _DIRS:
        radial_id[d] = len(roads)
        roads.append([at[(d, k)] for k in range(1, tau + 2)])
        road_names.append(f"radial_{d}")
    net = build_network(names, roads, coords=coords, road_names=road_names)

    slots = [
        Slot(
            tuple(Side(at[(d, 1)], at[(_DIRS[(q + 1) % 4], 1)], arc_id[(1, d)]) for q, d in enumerate(_DIRS)),
            (0.0, 0.0),
            0.3 * spacing,
        )
    ]
    for k in range(1, tau):
        for q, d in enumerate(_DIRS):
            nd = _DIRS[(q + 1) % 4]
            sides = (
                Side(at[(d, k)], at[(nd, k)], arc_id[(k, d)]),
                Side(at[(d, k + 1)], at[(nd, k + 1)], arc_id[(k + 1, d)]),
                Side(at[(d, k)], at[(d, k + 1)], radial_id[d]),
                Side(at[(nd, k)], at[(nd, k + 1)], radial_id[nd]),
            )
            corners = [coords[s] for s in (at[(d, k)], at[(nd, k)], at[(d, k + 1)], at[(nd, k + 1)])]
            cx = sum(c[0] for c in corners) / 4
            cy = sum(c[1] for c in corners) / 4
            slots.append(Slot(sides, (cx, cy), 0.15 * spacing))
    return Backbone("ring", tau, net, slots)


def block_template(rows: int, cols: int, road_span: int | None = None) -> tuple[RoadNetwork, list[str]]:
    """City-block neighbourhood: ``rows`` streets crossed by avenues.

    Every row is a street spanning all columns; rows 1, 5, 9, ... run one-way
    east and rows 3, 7, ... one-way west. Avenues sit on even columns plus the
    last one. The outer avenues are two-way, inner ones alternate between
    two-way and one-way (south, then north). Entrances are the ends of rows 1
    and ``rows - 2`` and both ends of the second avenue, so the template is
    strongly connected and every entrance ends a road.

    With ``road_span`` set, every street and avenue is cut into shorter roads
    of at most that many segments, with cut points staggered between
    neighbouring lines. The directed edges stay the same, only road identity
    (and hence turn counts) changes.
    """
    if rows < 3 or cols < 3:
        raise ValueError("block template needs at least 3 rows and 3 columns")

    def n(r: int, c: int) -> str:
        return f"t{r}_{c}"

    names = [n(r, c) for r in range(rows) for c in range(cols)]
    coords = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    roads: list = []
    road_names = []

    def add(seq: list[str], bidir: bool, name: str, offset: int) -> None:
        if road_span is None or len(seq) - 1 <= road_span:
            roads.append((seq, bidir))
            road_names.append(name)
            return
        cuts = [0] + [i for i in range(1, len(seq) - 1) if (i + offset) % road_span == 0] + [len(seq) - 1]
        for k, (a, b) in enumerate(zip(cuts, cuts[1:])):
            roads.append((seq[a : b + 1], bidir))
            road_names.append(f"{name}.{k}")

    for r in range(rows):
        seq = [n(r, c) for c in range(cols)]
        if r % 4 == 1:
            add(seq, False, f"row{r}", r)
        elif r % 4 == 3:
            add(seq[::-1], False, f"row{r}", r)
        else:
            add(seq, True, f"row{r}", r)
    avenues = sorted(set(range(0, cols, 2)) | {cols - 1})
    for i, c in enumerate(avenues):
        seq = [n(r, c) for r in range(rows)]
        if i == 0 or i == len(avenues) - 1 or i % 2 == 1:
            add(seq, True, f"col{c}", i + 1)
        elif i % 4 == 2:
            add(seq, False, f"col{c}", i + 1)
        else:
            add(seq[::-1], False, f"col{c}", i + 1)
    net = build_network(names, roads, coords=coords, road_names=road_names)
    a = avenues[1]
    entrances = list(dict.fromkeys(
        [n(1, 0), n(rows - 2, 0), n(1, cols - 1), n(rows - 2, cols - 1), n(0, a), n(rows - 1, a)]
    ))
    return net, entrances


def default_template() -> tuple[RoadNetwork, list[str]]:
    """The 30-node (5 x 6) block template with 6 entrances."""
    return block_template(5, 6)


def _project(p: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    """Fraction along ``a``-``b`` of the projection of ``p``, and the distance to that point."""
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    denom = dx * dx + dy * dy
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / denom if denom else 0.0
    t = min(1.0, max(0.0, t))
    return t, math.hypot(ax + t * dx - p[0], ay + t * dy - p[1])


def compose(
    backbone: Backbone,
    template: RoadNetwork,
    entrances: Sequence[int | str],
    seed: int = 0,
) -> RoadNetwork:
    """Place one template copy in every backbone slot and wire its entrances.

    Each entrance must be an end node of some template road. That road is
    extended by one segment to a new node inserted on the nearest side of the
    slot, so entering a neighbourhood costs one turn.
    """
    if not entrances:
        raise IncompatibleTemplate("template needs at least one entrance")
    if any(c is None for c in template.coords):
        raise IncompatibleTemplate("template nodes need coordinates")
    ent = [template.node(e) for e in entrances]
    if len(set(ent)) != len(ent):
        raise IncompatibleTemplate("duplicate entrance")
    ends: dict[int, tuple[int, bool]] = {}
    for e in ent:
        for road in template.roads:
            if road.nodes[0] == e:
                ends[e] = (road.road_id, True)
                break
            if road.nodes[-1] == e:
                ends[e] = (road.road_id, False)
                break
        else:
            raise IncompatibleTemplate(f"entrance {template.names[e]} is not the end of a template road")

    rng = random.Random(seed)
    bb = backbone.network
    xs = [c[0] for c in template.coords]  # type: ignore[index]
    ys = [c[1] for c in template.coords]  # type: ignore[index]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    half = max(max(xs) - min(xs), max(ys) - min(ys)) / 2 or 1.0

    names = list(bb.names)
    coords: list[tuple[float, float]] = [c for c in bb.coords]  # type: ignore[misc]
    road_nodes = [list(r.nodes) for r in bb.roads]
    road_dirs = [r.bidirectional for r in bb.roads]
    road_names = [r.name for r in bb.roads]
    lengths: dict[tuple[int, int], float] = {}
    overrides: dict[tuple[int, int, int], float] = {}
    inserts: dict[tuple[int, int, int], list[tuple[float, int]]] = {}

    for si, slot in enumerate(backbone.slots):
        scale = slot.radius / half
        base = len(names)
        for v, name in enumerate(template.names):
            x, y = template.coords[v]  # type: ignore[misc]
            names.append(f"s{si}_{name}")
            coords.append((slot.center[0] + (x - cx) * scale, slot.center[1] + (y - cy) * scale))
        road_base = len(road_nodes)
        for road in template.roads:
            road_nodes.append([base + v for v in road.nodes])
            road_dirs.append(road.bidirectional)
            road_names.append(f"s{si}_{road.name}")
        for (a, b), value in template.segment_lengths.items():
            lengths[(base + a, base + b)] = value * scale
        for (v, ri, rj), value in template.turn_costs.overrides.items():
            overrides[(base + v, road_base + ri, road_base + rj)] = value

        for e in ent:
            p = coords[base + e]
            best = None
            for side in slot.sides:
                t, dist = _project(p, coords[side.a], coords[side.b])
                if best is None or dist < best[0] - 1e-12:
                    best = (dist, side, t)
            _, side, t = best  # type: ignore[misc]
            t = min(0.85, max(0.15, t + rng.uniform(-0.05, 0.05)))
            attach = len(names)
            ax, ay = coords[side.a]
            bx, by = coords[side.b]
            names.append(f"s{si}_{template.names[e]}_gate")
            coords.append((ax + t * (bx - ax), ay + t * (by - ay)))
            inserts.setdefault((side.a, side.b, side.road), []).append((t, attach))
            rid, at_start = ends[e]
            seq = road_nodes[road_base + rid]
            if at_start:
                seq.insert(0, attach)
            else:
                seq.append(attach)

    for (a, b, rid), points in inserts.items():
        points.sort()
        seq = road_nodes[rid]
        ia, ib = seq.index(a), seq.index(b)
        mids = [v for _, v in points]
        if ia < ib:
            seq[ia + 1 : ia + 1] = mids
        else:
            seq[ib + 1 : ib + 1] = mids[::-1]

    roads = [(seq, d) for seq, d in zip(road_nodes, road_dirs)]
    net = build_network(
        names,
        roads,
        lengths,
        overrides,
        coords=coords,
        road_names=road_names,
        default_turn_cost=template.turn_costs.default_change,
    )
    return net


def fixture_table1() -> tuple[RoadNetwork, int, int]:
    """Seven two-way roads reproducing the published example costs.

    Routes from ``s`` to ``t``: (10, 4) fastest, (40, 1) simplest along the
    ring road ``ra``, (20, 3), (30, 2) and (40, 2). Sub-routes s-n7-n11 and
    s-n6-n8-n11 both cost (20, 1) but arrive at n11 on different roads.
    """
    names = ["s", "n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8", "n9", "n10", "n11", "t"]
    roads = [
        ["n6", "n8", "n11", "n10", "t"],  # ra: ring road
        ["n1", "n2", "n5", "n9"],  # rb
        ["n7", "n11"],  # rc
        ["n2", "n3", "n10"],  # rd
        ["n3", "n4"],  # re
        ["n6", "s", "n7", "n1"],  # rf
        ["n9", "n4", "t"],  # rg
    ]
    lengths = {
        ("n6", "n8"): 8, ("n8", "n11"): 7, ("n11", "n10"): 10, ("n10", "t"): 10,
        ("n1", "n2"): 2, ("n2", "n5"): 8, ("n5", "n9"): 8,
        ("n7", "n11"): 18,
        ("n2", "n3"): 2, ("n3", "n10"): 3,
        ("n3", "n4"): 2,
        ("n6", "s"): 5, ("s", "n7"): 2, ("n7", "n1"): 1,
        ("n9", "n4"): 8, ("n4", "t"): 1,
    }
    net = build_network(names, roads, lengths, road_names=["ra", "rb", "rc", "rd", "re", "rf", "rg"])
    return net, net.node("s"), net.node("t")


def random_network(
    rng: random.Random,
    n_nodes: int,
    *,
    oneway_prob: float = 0.3,
    extra_roads: int | None = None,
    integer_lengths: bool | None = None,
    max_tries: int = 1000,
) -> RoadNetwork:
    """Random strongly connected road network with lengths in [1, 10] and unit turn costs.

    Roads are short node chains (2-4 nodes); no unordered node pair appears in
    two roads. Integer lengths (chosen at random unless forced) create cost ties.
    """
    if integer_lengths is None:
        integer_lengths = rng.random() < 0.5
    for _ in range(max_tries):
        perm = list(range(n_nodes))
        rng.shuffle(perm)
        chains: list[list[int]] = []
        i = 0
        while i < n_nodes - 1:
            k = rng.randint(2, 4)
            chain = perm[i : i + k]
            if len(chain) < 2:
                break
            chains.append(chain)
            i += len(chain) - 1
        # close the chain loop so every road can be traversed both ways round
        chains.append([perm[-1], perm[0]])
        used = set()
        for c in chains:
            used.update(frozenset(p) for p in zip(c, c[1:]))
        if len(used) != sum(len(c) - 1 for c in chains):
            continue
        extra = extra_roads if extra_roads is not None else rng.randint(n_nodes // 4, n_nodes // 2)
        for _ in range(extra * 4):
            if extra <= 0:
                break
            k = rng.randint(2, 3)
            chain = rng.sample(range(n_nodes), k)
            pairs = {frozenset(p) for p in zip(chain, chain[1:])}
            if pairs & used:
                continue
            used |= pairs
            chains.append(chain)
            extra -= 1
        roads = [(c, rng.random() >= oneway_prob) for c in chains]
        lengths = {}
        for c in chains:
            for a, b in zip(c, c[1:]):
                lengths[(a, b)] = float(rng.randint(1, 10)) if integer_lengths else round(rng.uniform(1, 10), 3)
        net = build_network(n_nodes, roads, lengths)
        if is_strongly_connected(net):
            return net
    raise RuntimeError("could not generate a strongly connected network")
