"""Command-line interface: ``migraph <command> ...``.

Exit codes: 0 on success, 1 when an input graph cannot be read or is
invalid, 2 on usage errors (including out-of-range numeric arguments).
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from collections.abc import Sequence
from pathlib import Path

from migraph.errors import MigraphError, OutOfRange
from migraph.estimates import connectivity_probability, max_clusters_bound, monte_carlo_report
from migraph.formats import DotMode, export_dot, parse_graph, serialize_graph
from migraph.graph import MigrationGraph, apply_migration, condensation, is_migratable
from migraph.patterns import detect_patterns, pattern_summary
from migraph.reports import TABLE1_SIZES, compare_report, format_value, render_comparison, render_table1
from migraph.sampling import RandomGraphParams, sample_uniform_partition, synthesize_migration_graph
from migraph.strategy import canonical_plan

__all__ = ["main", "build_parser"]

SEED_ENV = "MIGRAPH_SEED"
PROG = "migraph"


class UsageError(Exception):
    pass


def _read_graph(path: str) -> MigrationGraph:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return parse_graph(data)


def _emit(text: str, out: str | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dump(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _seed(value: int | None) -> int:
    if value is None:
        raw = os.environ.get(SEED_ENV)
        if raw is None:
            return 0
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise UsageError(f"seed must be in [0, 2**64), got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# ---- commands ---------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    graph = _read_graph(args.file)
    cond = condensation(graph)
    sizes = [c.size for c in cond.clusters]
    report = compare_report(graph, cond) if len(graph) else None
    summary = {
        "components": len(graph),
        "dependencies": graph.edge_count,
        "migration_length": len(cond),
        "migration_depth": cond.depth,
        "width": cond.width,
        "cluster_sizes": {
            "min": min(sizes, default=0),
            "max": max(sizes, default=0),
            "mean": statistics.fmean(sizes) if sizes else 0.0,
            "sd": statistics.stdev(sizes) if len(sizes) > 1 else 0.0,
        },
    }
    if args.json:
        summary["comparison"] = report.as_dict()["rows"] if report else []
        _emit(_dump(summary))
        return 0
    cs = summary["cluster_sizes"]
    lines = [
        f"components: {summary['components']}",
        f"dependencies: {summary['dependencies']}",
        f"migration length: {summary['migration_length']}",
        f"migration depth: {summary['migration_depth']}",
        f"width: {summary['width']}",
        f"cluster sizes: min {cs['min']}, max {cs['max']}, "
        f"mean {format_value(cs['mean'])}, sd {format_value(cs['sd'])}",
        "",
    ]
    text = "\n".join(lines) + "\n"
    text += render_comparison(report) if report else "comparison: n/a (empty graph)\n"
    _emit(text)
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    graph = _read_graph(args.file)
    plan = canonical_plan(graph)
    if args.json:
        _emit(_dump({
            "depth": plan.depth,
            "length": plan.length,
            "width": plan.width,
            "strategy_count": plan.strategy_count,
            "levels": [[list(c.members) for c in level] for level in plan.levels],
        }))
        return 0
    lines = [f"depth {plan.depth}, length {plan.length}, width {plan.width}"]
    for k, level in enumerate(plan.levels, start=1):
        clusters = " ".join("{" + ", ".join(c.members) + "}" for c in level)
        lines.append(f"T({k}) [{len(level)}]: {clusters}")
    lines.append(f"strategy_count: {plan.strategy_count}")
    _emit("\n".join(lines) + "\n")
    return 0


def cmd_step(args: argparse.Namespace) -> int:
    graph = _read_graph(args.file)
    if not is_migratable(graph, args.migrate):
        print(f"{PROG}: warning: {args.migrate!r} is not migratable; graph unchanged", file=sys.stderr)
    after = apply_migration(graph, args.migrate)
    _emit(serialize_graph(after).decode("utf-8"), args.output)
    return 0


def cmd_patterns(args: argparse.Namespace) -> int:
    graph = _read_graph(args.file)
    if args.min_fan < 2:
        raise UsageError(f"--min-fan must be at least 2, got {args.min_fan}")
    found = detect_patterns(graph, args.min_fan)
    summary = pattern_summary(found)
    if args.json:
        _emit(_dump({
            "counts": {k.value: v for k, v in summary.counts.items()},
            "instances": [
                {
                    "kind": p.kind.value,
                    "focus": p.focus,
                    "participants": list(p.participants),
                    "arity": p.arity,
                    "simple": p.simple,
                }
                for p in found
            ],
        }))
        return 0
    lines = [f"{p.kind.value} {p.focus} arity={p.arity}"
             + ("" if p.simple else " (not simple)")
             + f": {' '.join(p.participants)}" for p in found]
    lines.append("total: " + ", ".join(f"{k.value}={v}" for k, v in summary.counts.items()))
    _emit("\n".join(lines) + "\n")
    return 0


def cmd_sample_partition(args: argparse.Namespace) -> int:
    part = sample_uniform_partition(args.n, _seed(args.seed))
    _emit(f"{part}\n")
    return 0


def cmd_sample_graph(args: argparse.Namespace) -> int:
    params = RandomGraphParams(n=args.n, c=args.c, seed=_seed(args.seed))
    graph = synthesize_migration_graph(params)
    _emit(serialize_graph(graph).decode("utf-8"), args.output)
    return 0


def cmd_stats_table1(args: argparse.Namespace) -> int:
    sizes = args.n if args.n else TABLE1_SIZES
    if any(n < 2 for n in sizes):
        raise OutOfRange("every n must be at least 2")
    _emit(render_table1(sizes))
    return 0


def cmd_stats_bound(args: argparse.Namespace) -> int:
    _emit(f"{max_clusters_bound(args.n, args.s):.6f}\n")
    return 0


def cmd_stats_connectivity(args: argparse.Namespace) -> int:
    _emit(f"{connectivity_probability(args.c):.6f}\n")
    return 0


def cmd_montecarlo(args: argparse.Namespace) -> int:
    if args.workers < 1:
        raise UsageError(f"--workers must be at least 1, got {args.workers}")
    stats = monte_carlo_report(args.n, args.trials, _seed(args.seed), workers=args.workers)
    fields = {
        "n": stats.n,
        "trials": stats.trials,
        "expected_cluster_count": stats.expected_cluster_count,
        "expected_count_sd": stats.cluster_count_sd,
        "observed_cluster_count": stats.observed_cluster_count,
        "observed_count_sd": stats.observed_count_sd,
        "expected_cluster_size": stats.expected_cluster_size,
        "observed_mean_size": stats.observed_mean_size,
        "low_sample": stats.low_sample,
    }
    if args.json:
        _emit(_dump(fields))
    else:
        _emit("".join(f"{k}: {format_value(v, 4) if not isinstance(v, bool) else v}\n" for k, v in fields.items()))
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    graph = _read_graph(args.file)
    _emit(export_dot(graph, DotMode(args.mode)).decode("utf-8"), args.output)
    return 0


# ---- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Plan migrations over component dependency graphs.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="graph document (JSON), or - for stdin")
        return p

    p = graph_command("analyze", "structure metrics and predicted-versus-observed report")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = graph_command("plan", "canonical migration plan by level")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = graph_command("step", "migrate one component and print the remaining graph")
    p.add_argument("--migrate", required=True, metavar="ID")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_step)

    p = graph_command("patterns", "list fans, mutual pairs, cycles and isolated components")
    p.add_argument("--min-fan", type=int, default=2, metavar="K")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_patterns)

    sample = sub.add_parser("sample", help="draw random partitions or graphs").add_subparsers(
        dest="what", required=True, metavar="what"
    )
    p = sample.add_parser("partition", help="uniform random set partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sample_partition)
    p = sample.add_parser("graph", help="random migration graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, default=10.0)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sample_graph)

    stats = sub.add_parser("stats", help="closed-form estimates").add_subparsers(
        dest="what", required=True, metavar="what"
    )
    p = stats.add_parser("table1", help="predicted cluster metrics for several sizes")
    p.add_argument("--n", type=_int_list, metavar="N[,N...]")
    p.set_defaults(func=cmd_stats_table1)
    p = stats.add_parser("bound", help="bound on the largest cluster count among s projects")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_stats_bound)
    p = stats.add_parser("connectivity", help="limit probability that a random DAG is connected")
    p.add_argument("--c", type=float, required=True)
    p.set_defaults(func=cmd_stats_connectivity)

    p = sub.add_parser("montecarlo", help="sample partitions and summarize their block counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_montecarlo)

    p = graph_command("export-dot", "GraphViz rendering")
    p.add_argument("--mode", choices=[m.value for m in DotMode], default=DotMode.FLAT.value)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, OutOfRange) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (MigraphError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
