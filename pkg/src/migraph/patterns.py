"""Local dependency patterns: isolated nodes, fans, mutual pairs and cycles."""

from __future__ import annotations

import enum
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

from migraph.graph import MigrationGraph, condensation

__all__ = ["PatternKind", "PatternInstance", "PatternSummary", "detect_patterns", "pattern_summary"]


class PatternKind(enum.Enum):
    ISOLATED = "Isolated"
    FAN_IN = "FanIn"
    FAN_OUT = "FanOut"
    MUTUAL_PAIR = "MutualPair"
    CYCLE = "Cycle"


_KIND_ORDER = {kind: i for i, kind in enumerate(PatternKind)}


@dataclass(frozen=True)
class PatternInstance:
    """One occurrence of a pattern.

    ``focus`` is the hub of a fan, or the smallest member of a pair or cycle.
    ``arity`` is the fan width or the cycle length.  ``simple`` is False for a
    strongly connected block that is not a single directed cycle.
    """

    kind: PatternKind
    focus: str
    participants: tuple[str, ...]
    arity: int
    simple: bool = True

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.focus, self.participants)


def _detect(graph: MigrationGraph, min_fan: int) -> list[PatternInstance]:
    ids = graph.ids
    succ, pred = graph.adjacency, graph.reverse_adjacency
    found: list[PatternInstance] = []

    for v, cid in enumerate(ids):
        ins, outs = pred[v], succ[v]
        if not ins and not outs:
            found.append(PatternInstance(PatternKind.ISOLATED, cid, (cid,), 0))
        if len(ins) >= min_fan:
            found.append(PatternInstance(PatternKind.FAN_IN, cid, tuple(sorted((cid, *(ids[u] for u in ins)))), len(ins)))
        if len(outs) >= min_fan:
            found.append(PatternInstance(PatternKind.FAN_OUT, cid, tuple(sorted((cid, *(ids[w] for w in outs)))), len(outs)))

    for cluster in condensation(graph).clusters:
        size = cluster.size
        if size == 2:
            found.append(PatternInstance(PatternKind.MUTUAL_PAIR, cluster.members[0], cluster.members, 2))
        elif size >= 3:
            found.extend(_block_patterns(graph, cluster.members, cluster.cluster_degree))

    found.sort(key=PatternInstance.sort_key)
    return found


def _block_patterns(graph: MigrationGraph, members: tuple[str, ...], degree: int) -> list[PatternInstance]:
    if degree == 1:
        return [PatternInstance(PatternKind.CYCLE, members[0], members, len(members))]
    inside = set(members)
    arcs = {(s, t) for s in members for t in graph.successors(s) if t in inside}
    pairs = {(s, t) for s, t in arcs if s < t and (t, s) in arcs}
    # a strongly connected block whose undirected shape is a tree is made of
    # mutual pairs only: it contains no directed cycle longer than two
    if len(pairs) == len(members) - 1 and len(arcs) == 2 * len(pairs):
        return [PatternInstance(PatternKind.MUTUAL_PAIR, s, (s, t), 2) for s, t in sorted(pairs)]
    return [PatternInstance(PatternKind.CYCLE, members[0], members, len(members), simple=False)]


def detect_patterns(graph: MigrationGraph, min_fan: int = 2) -> list[PatternInstance]:
    """Classify the local dependency structures of *graph*.

    * Isolated: no incoming and no outgoing dependency.
    * FanIn at w: at least *min_fan* components depend on w.
    * FanOut at v: v depends on at least *min_fan* components.
    * MutualPair: a two-component cluster, or one bidirectional link of a
      larger cluster that consists of bidirectional links only.
    * Cycle: any other cluster of three or more; ``simple`` tells whether it
      is a single directed cycle.

    A component may take part in several instances.
    """
    if min_fan < 2:
        raise ValueError(f"min_fan must be at least 2, got {min_fan}")
    return _detect(graph, min_fan)


@dataclass(frozen=True)
class PatternSummary:
    counts: dict[PatternKind, int]
    arities: dict[PatternKind, dict[int, int]]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def pattern_summary(instances: Iterable[PatternInstance]) -> PatternSummary:
    """Count instances per kind and tally their arities."""
    counts = {kind: 0 for kind in PatternKind}
    hist: dict[PatternKind, Counter[int]] = {kind: Counter() for kind in PatternKind}
    for inst in instances:
        counts[inst.kind] += 1
        hist[inst.kind][inst.arity] += 1
    return PatternSummary(counts, {kind: dict(sorted(h.items())) for kind, h in hist.items()})
