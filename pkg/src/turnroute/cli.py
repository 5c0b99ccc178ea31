"""``turnroute`` command line: query, bench, gen and oracle subcommands."""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import near, optimal, oracle, synth
from .errors import EpsilonNegative, RoutingError, TooLarge, Unreachable
from .io import ResultRecord, parse_network, write_network, write_results
from .model import RoadNetwork, reachable

EXIT_OK, EXIT_USAGE, EXIT_UNREACHABLE, EXIT_TOO_LARGE = 0, 1, 2, 3

# algorithm -> problem it answers (None: any)
ALGORITHMS: dict[str, str | None] = {
    "fs": "fs",
    "sf": "sf",
    "bsl": "fs",
    "snf-dfs": "snf",
    "snf-astar": "snf",
    "snf-astar-wb": "snf",
    "fns-dfs": "fns",
    "fns-astar": "fns",
    "fns-astar-wb": "fns",
    "oracle": None,
}
DEFAULT_ALGO = {"fs": "fs", "sf": "sf", "snf": "snf-astar", "fns": "fns-astar"}
DEFAULT_EPSILONS = (0.01, 0.05, 0.1, 0.2, 0.3)
BSL_ROAD_LIMIT = 3000


class UsageError(Exception):
    pass


@dataclass
class SearchFlags:
    prune_length: bool = True
    prune_complexity: bool = True
    upper_bound: bool = True
    dominance: bool = True
    no_revisit: bool = True


def solve(
    net: RoadNetwork,
    problem: str,
    algorithm: str,
    n_s: int,
    n_t: int,
    epsilon: float = 0.0,
    flags: SearchFlags | None = None,
) -> ResultRecord:
    """Run one query and package the answer as a result record (elapsed_ms unset)."""
    flags = flags or SearchFlags()
    if algorithm not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {algorithm!r}")
    expected = ALGORITHMS[algorithm]
    if expected is not None and expected != problem:
        raise UsageError(f"algorithm {algorithm} answers {expected}, not {problem}")
    if problem in ("fs", "sf"):
        epsilon = 0.0
    elif epsilon < 0:
        raise EpsilonNegative(f"epsilon must be >= 0, got {epsilon}")

    if algorithm == "oracle":
        routes = oracle.enumerate_simple_routes(net, n_s, n_t)
        if not routes.routes:
            raise Unreachable(f"{net.names[n_t]} is not reachable from {net.names[n_s]}")
        route = oracle.oracle_route(routes, problem, epsilon)
        nodes, length, complexity, examined = route.nodes, route.length, route.complexity, len(routes)
    elif algorithm in ("fs", "sf", "bsl"):
        fn = {"fs": optimal.fastest_simplest, "sf": optimal.simplest_fastest, "bsl": optimal.bsl_fastest_simplest}
        ans = fn[algorithm](net, n_s, n_t)
        nodes, length, complexity, examined = ans.route.nodes, ans.length, ans.complexity, ans.routes_examined
    else:
        kind, _, variant = algorithm.partition("-")
        if variant == "dfs":
            fn = near.snf_dfs if kind == "snf" else near.fns_dfs
            ans = fn(
                net, n_s, n_t, epsilon,
                prune_length=flags.prune_length,
                prune_complexity=flags.prune_complexity,
                upper_bound=flags.upper_bound,
            )
        else:
            fn = near.snf_astar if kind == "snf" else near.fns_astar
            ans = fn(
                net, n_s, n_t, epsilon, variant != "astar-wb",
                prune_length=flags.prune_length,
                prune_complexity=flags.prune_complexity,
                upper_bound=flags.upper_bound,
                dominance=flags.dominance,
                no_revisit=flags.no_revisit,
            )
        nodes, length, complexity, examined = ans.route.nodes, ans.length, ans.complexity, ans.routes_examined
    return ResultRecord(
        problem=problem,
        algorithm=algorithm,
        epsilon=epsilon,
        source=net.names[n_s],
        target=net.names[n_t],
        length=length,
        complexity=complexity,
        route=[net.names[v] for v in nodes],
        routes_examined=int(examined),
    )


def timed_solve(net, problem, algorithm, n_s, n_t, epsilon=0.0, flags=None, timing=True) -> ResultRecord:
    start = time.perf_counter()
    rec = solve(net, problem, algorithm, n_s, n_t, epsilon, flags)
    if timing:
        rec.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return rec


def load_network(path: str | Path) -> RoadNetwork:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def sample_queries(net: RoadNetwork, count: int, seed: int) -> tuple[list[tuple[int, int]], int]:
    """Uniform ordered pairs of distinct nodes with the target reachable.

    Returns the pairs and how many unreachable draws were resampled.
    """
    if net.node_count < 2:
        raise UsageError("network needs at least two nodes for queries")
    rng = random.Random(seed)
    reach: dict[int, list[bool]] = {}
    out: list[tuple[int, int]] = []
    resampled = 0
    while len(out) < count:
        s, t = rng.sample(range(net.node_count), 2)
        if s not in reach:
            reach[s] = reachable(net, s)
        if reach[s][t]:
            out.append((s, t))
        else:
            resampled += 1
            if resampled > 100 * count + 1000:
                raise UsageError("too few connected node pairs to sample queries")
    return out, resampled


@dataclass
class BenchConfig:
    network: str
    queries: int = 1000
    seed: int = 0
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    algorithms: tuple[str, ...] = ("fs", "bsl", "snf-dfs", "snf-astar", "fns-dfs", "fns-astar")
    workers: int = 1
    timing: bool = True
    force_bsl: bool = False
    bsl_timeout: float | None = None
    notes: list[str] = field(default_factory=list)


_WORKER_NET: RoadNetwork | None = None


def _worker_init(text: str) -> None:
    global _WORKER_NET
    _WORKER_NET = parse_network(text)


def _worker_run(job: tuple[str, str, int, int, float, bool]) -> ResultRecord:
    problem, algorithm, s, t, eps, timing = job
    assert _WORKER_NET is not None
    return timed_solve(_WORKER_NET, problem, algorithm, s, t, eps, timing=timing)


def run_bench(cfg: BenchConfig, net: RoadNetwork, net_text: str | None = None) -> list[ResultRecord]:
    for algo in cfg.algorithms:
        if algo not in ALGORITHMS or algo == "oracle":
            raise UsageError(f"algorithm {algo!r} cannot be benchmarked")
    pairs, resampled = sample_queries(net, cfg.queries, cfg.seed)
    if resampled:
        cfg.notes.append(f"resampled {resampled} unreachable query pairs")
    algos = list(cfg.algorithms)
    if "bsl" in algos and len(net.roads) > BSL_ROAD_LIMIT and not cfg.force_bsl:
        algos.remove("bsl")
        cfg.notes.append(f"bsl skipped: {len(net.roads)} roads exceeds {BSL_ROAD_LIMIT} (use --force-bsl)")
    if "bsl" in algos and not net.turn_costs.uniform:
        algos.remove("bsl")
        cfg.notes.append("bsl skipped: network has non-unit turn costs")

    records: list[ResultRecord] = []
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(cfg.workers, initializer=_worker_init, initargs=(net_text or write_network(net),))
    try:
        for algo in algos:
            problem = ALGORITHMS[algo]
            assert problem is not None
            eps_list = cfg.epsilons if problem in ("snf", "fns") else (0.0,)
            for eps in eps_list:
                jobs = [(problem, algo, s, t, eps, cfg.timing) for s, t in pairs]
                if algo == "bsl" and cfg.bsl_timeout is not None:
                    spent = 0.0
                    for i, (s, t) in enumerate(pairs):
                        if spent > cfg.bsl_timeout:
                            cfg.notes.append(f"bsl stopped after {i} queries: over {cfg.bsl_timeout} s budget")
                            break
                        start = time.perf_counter()
                        records.append(timed_solve(net, problem, algo, s, t, eps, timing=cfg.timing))
                        spent += time.perf_counter() - start
                elif pool is not None:
                    records.extend(pool.map(_worker_run, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
                else:
                    records.extend(timed_solve(net, problem, algo, s, t, eps, timing=cfg.timing) for s, t in pairs)
    finally:
        if pool is not None:
            pool.shutdown()
    return records


def summarize(records: Sequence[ResultRecord]) -> str:
    groups: dict[tuple[str, float], list[ResultRecord]] = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.epsilon), []).append(rec)
    rows = [("algorithm", "epsilon", "queries", "mean_ms", "median_ms", "mean_routes_examined")]
    for (algo, eps), recs in groups.items():
        times = [r.elapsed_ms for r in recs]
        rows.append((
            algo,
            f"{eps:g}",
            str(len(recs)),
            f"{statistics.fmean(times):.3f}",
            f"{statistics.median(times):.3f}",
            f"{statistics.fmean(r.routes_examined for r in recs):.1f}",
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _epsilon_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("epsilons must be a non-empty list of values >= 0")
    return values


def _add_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("search switches")
    g.add_argument("--no-prune-length", action="store_true", help="disable the length-threshold prune")
    g.add_argument("--no-prune-complexity", action="store_true", help="disable the complexity prune")
    g.add_argument("--no-upper-bound", action="store_true", help="disable incumbent tightening")
    g.add_argument("--no-dominance", action="store_true", help="A* only: keep dominated labels")
    g.add_argument("--allow-revisit", action="store_true", help="A* only: skip the no-revisit check")


def _flags(args: argparse.Namespace) -> SearchFlags:
    return SearchFlags(
        prune_length=not args.no_prune_length,
        prune_complexity=not args.no_prune_complexity,
        upper_bound=not args.no_upper_bound,
        dominance=not args.no_dominance,
        no_revisit=not args.allow_revisit,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="turnroute", description="Turn-aware route planning on road networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("query", help="answer one routing query")
    q.add_argument("network", help="network file")
    q.add_argument("--problem", required=True, choices=["fs", "sf", "snf", "fns"])
    q.add_argument("--source", required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--epsilon", type=float, default=0.0)
    q.add_argument("--algo", choices=sorted(ALGORITHMS), help="default: the exact/A* method for the problem")
    q.add_argument("--out", help="append the result line to this file instead of stdout")
    _add_flags(q)

    b = sub.add_parser("bench", help="run a batch of random queries and summarise")
    b.add_argument("network")
    b.add_argument("--queries", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--epsilons", type=_epsilon_list, default=DEFAULT_EPSILONS)
    b.add_argument("--algos", default=",".join(BenchConfig.algorithms), help="comma-separated algorithm list")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", help="write result lines here; summary goes to stdout")
    b.add_argument("--no-timing", action="store_true", help="record elapsed_ms as 0 for reproducible files")
    b.add_argument("--force-bsl", action="store_true", help=f"run bsl even above {BSL_ROAD_LIMIT} roads")
    b.add_argument("--bsl-timeout", type=float, help="stop bsl once its total time exceeds this many seconds")

    g = sub.add_parser("gen", help="generate a synthetic network")
    g.add_argument("topology", choices=["grid", "ring"])
    g.add_argument("--tau", type=int, required=True)
    g.add_argument("--template", help="template network file (default: built-in 30-node template)")
    g.add_argument("--entrances", help="comma-separated template entrance nodes (required with --template)")
    g.add_argument("--backbone-only", action="store_true", help="write the backbone without neighbourhoods")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="network output path (default: stdout, counts go to stderr)")

    o = sub.add_parser("oracle", help="exhaustive answer on a small network")
    o.add_argument("network")
    o.add_argument("--mode", required=True, choices=["fs", "sf", "snf", "fns"])
    o.add_argument("--source", required=True)
    o.add_argument("--target", required=True)
    o.add_argument("--epsilon", type=float, default=0.0)
    return parser


def _emit(text: str, out: str | None, append: bool = False) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "a" if append else "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_query(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    algo = args.algo or DEFAULT_ALGO[args.problem]
    rec = timed_solve(net, args.problem, algo, net.node(args.source), net.node(args.target), args.epsilon, _flags(args))
    _emit(write_results([rec]), args.out, append=True)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    rec = timed_solve(net, args.mode, "oracle", net.node(args.source), net.node(args.target), args.epsilon)
    sys.stdout.write(write_results([rec]))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    text = Path(args.network).read_text(encoding="utf-8")
    net = parse_network(text)
    cfg = BenchConfig(
        network=args.network,
        queries=args.queries,
        seed=args.seed,
        epsilons=args.epsilons,
        algorithms=tuple(a.strip() for a in args.algos.split(",") if a.strip()),
        workers=args.workers,
        timing=not args.no_timing,
        force_bsl=args.force_bsl,
        bsl_timeout=args.bsl_timeout,
    )
    records = run_bench(cfg, net, text)
    table = summarize(records)
    if args.out:
        _emit(write_results(records), args.out)
        sys.stdout.write(table)
    else:
        sys.stdout.write(write_results(records))
        sys.stderr.write(table)
    for note in cfg.notes:
        sys.stderr.write(f"note: {note}\n")
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    backbone = (synth.gen_grid_backbone if args.topology == "grid" else synth.gen_ring_backbone)(args.tau)
    if args.backbone_only:
        net = backbone.network
    else:
        if args.template:
            if not args.entrances:
                raise UsageError("--entrances is required with --template")
            template = load_network(args.template)
            entrances = [e.strip() for e in args.entrances.split(",") if e.strip()]
        else:
            template, entrances = synth.default_template()
        net = synth.compose(backbone, template, entrances, args.seed)
    _emit(write_network(net), args.out)
    (sys.stdout if args.out else sys.stderr).write(backbone.summary() + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"query": _cmd_query, "bench": _cmd_bench, "gen": _cmd_gen, "oracle": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except Unreachable as exc:
        print(f"turnroute: unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except TooLarge as exc:
        print(f"turnroute: too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (UsageError, RoutingError) as exc:
        print(f"turnroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"turnroute: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
