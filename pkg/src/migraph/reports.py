"""Tabular reports: predicted cluster metrics and predicted-versus-observed."""

from __future__ import annotations

import statistics
from collections.abc import Iterable
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal

from migraph.errors import OutOfRange
from migraph.estimates import ClusterStatistics, expected_stats
from migraph.graph import CondensationGraph, MigrationGraph, condensation

__all__ = [
    "TABLE1_SIZES",
    "ComparisonRow",
    "ComparisonReport",
    "round_half_up",
    "format_value",
    "table1_row",
    "render_table1",
    "graph_statistics",
    "compare_report",
    "render_comparison",
]

TABLE1_SIZES = tuple(10**k for k in range(1, 10))


def round_half_up(x: float, places: int = 0) -> Decimal:
    """Round half away from zero (Python's ``round`` rounds half to even)."""
    quantum = Decimal(1).scaleb(-places)
    return Decimal(repr(x)).quantize(quantum, rounding=ROUND_HALF_UP)


def format_value(x: float | int | None, places: int = 2) -> str:
    """Render a report cell: integers stay integers, ``None`` is ``n/a``."""
    if x is None:
        return "n/a"
    if isinstance(x, int) or float(x).is_integer():
        return str(int(x))
    return str(round_half_up(x, places))


def table1_row(n: int) -> tuple[int, int, int, int, int, int]:
    """``(n, ln n, n/ln n, sqrt(n)/ln n, n/ln(n)**2, sqrt(n))`` rounded to integers."""
    s = expected_stats(n)
    values = (
        s.expected_cluster_size,
        s.expected_cluster_count,
        s.cluster_count_sd,
        s.depth_conservative,
        s.depth_optimistic,
    )
    return (n, *(int(round_half_up(v)) for v in values))


def render_table1(sizes: Iterable[int] = TABLE1_SIZES) -> str:
    header = "n | ln n | n/ln n | sqrt(n)/ln n | n/ln^2 n | sqrt(n)"
    rows = [" | ".join(map(str, table1_row(n))) for n in sizes]
    return "\n".join([header, *rows]) + "\n"


@dataclass(frozen=True)
class ComparisonRow:
    metric: str
    formula: str
    expected: float | None
    observed: float | int | None


@dataclass(frozen=True)
class ComparisonReport:
    """Predicted versus observed cluster metrics for one graph."""

    n: int
    rows: tuple[ComparisonRow, ...]

    def row(self, metric: str) -> ComparisonRow:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(metric)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "rows": [
                {"metric": r.metric, "formula": r.formula, "expected": r.expected, "observed": r.observed}
                for r in self.rows
            ],
        }


def graph_statistics(graph: MigrationGraph, cond: CondensationGraph | None = None) -> ClusterStatistics:
    """Expected metrics for ``len(graph)`` components next to the graph's actual ones.

    Expected fields are ``None`` below two components, where the logarithmic
    formulas are undefined.  The size SD uses the sample (n - 1) convention and
    is 0 for a single cluster.
    """
    n = len(graph)
    if n < 1:
        raise OutOfRange("a comparison needs at least one component")
    cond = cond if cond is not None else condensation(graph)
    sizes = [c.size for c in cond.clusters]
    base = expected_stats(n) if n >= 2 else ClusterStatistics(n, None, None, None, None, None)
    return replace(
        base,
        observed_cluster_count=len(sizes),
        observed_mean_size=n / len(sizes),
        observed_size_sd=statistics.stdev(sizes) if len(sizes) > 1 else 0.0,
        observed_depth=cond.depth,
    )


def compare_report(graph: MigrationGraph, cond: CondensationGraph | None = None) -> ComparisonReport:
    """Five-row comparison of predicted and observed cluster metrics.

    Raises:
        OutOfRange: the graph is empty.
    """
    s = graph_statistics(graph, cond)
    count = s.observed_cluster_count
    rows = (
        ComparisonRow("Cluster size", "ln n", s.expected_cluster_size, s.observed_mean_size),
        ComparisonRow("Cluster count", "n/ln n", s.expected_cluster_count, count),
        ComparisonRow("Std. dev.", "sqrt(n)/ln n", s.cluster_count_sd, s.observed_size_sd),
        ComparisonRow("Migration depth (optim.)", "sqrt(n)", s.depth_optimistic, s.observed_depth),
        ComparisonRow("Migration depth (cons.)", "n/ln^2 n", s.depth_conservative, s.observed_depth),
    )
    return ComparisonReport(s.n, rows)


def render_comparison(report: ComparisonReport, places: int = 2) -> str:
    cells = [
        (r.metric, r.formula, format_value(r.expected, places), format_value(r.observed, places))
        for r in report.rows
    ]
    header = ("Metric", "Formula", "Expected", "Observed")
    widths = [max(len(row[i]) for row in [header, *cells]) for i in range(4)]
    lines = []
    for row in [header, *cells]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
