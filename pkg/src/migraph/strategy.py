"""Migration strategies, the canonical plan and complexity measures.

A strategy is a sequence of component picks; each pick migrates the pick's
whole cluster if (and only if) that cluster has no remaining outside
dependency.  Because removing a whole cluster never changes the clusters that
remain, strategies are simulated on the condensation: a cluster is migratable
exactly when all of its condensation successors are gone.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from migraph.errors import TooLarge, UnknownComponent
from migraph.graph import CondensationGraph, MigrationCluster, MigrationGraph, condensation

__all__ = [
    "Strategy",
    "StrategyCheck",
    "CanonicalPlan",
    "check_strategy",
    "is_reasonable",
    "is_successful",
    "migration_length",
    "canonical_times",
    "canonical_plan",
    "migration_depth",
    "level_width",
    "enumerate_reasonable_successful",
    "random_strategy",
]


@dataclass(frozen=True)
class Strategy:
    picks: tuple[str, ...]

    def __init__(self, picks: Iterable[str] = ()) -> None:
        object.__setattr__(self, "picks", tuple(picks))

    @property
    def length(self) -> int:
        return len(self.picks)

    def __len__(self) -> int:
        return len(self.picks)

    def __iter__(self):
        return iter(self.picks)


@dataclass(frozen=True)
class StrategyCheck:
    """Outcome of simulating a strategy.

    ``violation`` is the index of the first pick that was not migratable at
    its step, or ``None`` when every pick was.
    """

    reasonable: bool
    violation: int | None
    successful: bool

    def __bool__(self) -> bool:
        return self.reasonable and self.successful


def _picks(strategy: Strategy | Sequence[str]) -> tuple[str, ...]:
    return strategy.picks if isinstance(strategy, Strategy) else tuple(strategy)


def check_strategy(
    graph: MigrationGraph,
    strategy: Strategy | Sequence[str],
    cond: CondensationGraph | None = None,
) -> StrategyCheck:
    """Simulate *strategy* on *graph*.

    A non-migratable pick leaves the graph unchanged and the simulation goes
    on, so ``successful`` reflects the whole sequence.  Pass a precomputed
    condensation of *graph* as *cond* to skip recomputing it.

    Raises:
        UnknownComponent: a pick names a component that is not in the graph
            at that step (never present, or already migrated).
    """
    cond = condensation(graph) if cond is None else cond
    pending = [len(s) for s in cond.successors]
    gone = [False] * len(cond)
    remaining = len(cond)
    violation = None
    for step, pick in enumerate(_picks(strategy)):
        c = cond.membership.get(pick)
        if c is None or gone[c]:
            raise UnknownComponent(pick, f"pick {step}")
        if pending[c]:
            if violation is None:
                violation = step
            continue
        gone[c] = True
        remaining -= 1
        for p in cond.predecessors[c]:
            pending[p] -= 1
    return StrategyCheck(violation is None, violation, remaining == 0)


def is_reasonable(graph: MigrationGraph, strategy: Strategy | Sequence[str]) -> StrategyCheck:
    """Check that every pick is migratable at its step.

    The returned :class:`StrategyCheck` is truthy only if the strategy is also
    successful; test ``.reasonable`` for this property alone and
    ``.violation`` for the first offending index.
    """
    return check_strategy(graph, strategy)


def is_successful(graph: MigrationGraph, strategy: Strategy | Sequence[str]) -> bool:
    """Whether applying the picks in order leaves the empty graph."""
    return check_strategy(graph, strategy).successful


def migration_length(graph: MigrationGraph) -> int:
    """Number of migration clusters, i.e. the length of every reasonable successful strategy."""
    return len(condensation(graph))


def canonical_times(graph: MigrationGraph) -> dict[MigrationCluster, int]:
    cond = condensation(graph)
    return dict(zip(cond.clusters, cond.times))


def migration_depth(graph: MigrationGraph) -> int:
    return condensation(graph).depth


def level_width(graph: MigrationGraph) -> int:
    """Largest number of clusters sharing one canonical migration time."""
    return condensation(graph).width


@dataclass(frozen=True)
class CanonicalPlan:
    """Level sets ``T(1), ..., T(d)`` of the condensation.

    Within a level, clusters are ordered by their smallest member id; any
    other order is an equally valid canonical strategy, and
    ``strategy_count`` says how many there are.
    """

    levels: tuple[tuple[MigrationCluster, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def length(self) -> int:
        return sum(len(level) for level in self.levels)

    @property
    def width(self) -> int:
        return max((len(level) for level in self.levels), default=0)

    @property
    def strategy_count(self) -> int:
        return math.prod(math.factorial(len(level)) for level in self.levels)

    def strategy(self) -> Strategy:
        """Flatten the plan, picking each cluster's smallest member."""
        return Strategy(c.representative for level in self.levels for c in level)


def canonical_plan(graph: MigrationGraph, cond: CondensationGraph | None = None) -> CanonicalPlan:
    cond = condensation(graph) if cond is None else cond
    return CanonicalPlan(tuple(tuple(cond.clusters[i] for i in level) for level in cond.levels))


def enumerate_reasonable_successful(graph: MigrationGraph, limit: int) -> list[Strategy]:
    """List every reasonable successful strategy, one pick per cluster.

    Picks use each cluster's smallest member, so strategies differing only in
    which member of a cluster is named are reported once.  The result is in
    lexicographic order of cluster indices.

    Raises:
        TooLarge: more than *limit* strategies exist.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    cond = condensation(graph)
    k = len(cond)
    pending = [len(s) for s in cond.successors]
    reps = [c.representative for c in cond.clusters]
    found: list[Strategy] = []
    path: list[int] = []

    def extend() -> None:
        if len(path) == k:
            if len(found) >= limit:
                raise TooLarge(f"more than {limit} reasonable successful strategies")
            found.append(Strategy(reps[c] for c in path))
            return
        taken = set(path)
        ready = [c for c in range(k) if not pending[c] and c not in taken]
        for c in ready:
            path.append(c)
            for p in cond.predecessors[c]:
                pending[p] -= 1
            extend()
            for p in cond.predecessors[c]:
                pending[p] += 1
            path.pop()

    extend()
    return found


def random_strategy(
    graph: MigrationGraph,
    rng: np.random.Generator,
    cond: CondensationGraph | None = None,
) -> Strategy:
    """Draw a reasonable successful strategy by random greedy choice.

    At every step one of the currently migratable clusters is chosen
    uniformly at random and a uniformly random member of it is picked.
    """
    cond = condensation(graph) if cond is None else cond
    k = len(cond)
    u_cluster = rng.random(k)
    u_member = rng.random(k)
    pending = [len(s) for s in cond.successors]
    ready = [c for c in range(k) if not pending[c]]
    picks = []
    for step in range(k):
        j = int(u_cluster[step] * len(ready))
        c = ready[j]
        ready[j] = ready[-1]
        ready.pop()
        members = cond.clusters[c].members
        picks.append(members[int(u_member[step] * len(members))])
        for p in cond.predecessors[c]:
            pending[p] -= 1
            if not pending[p]:
                ready.append(p)
    return Strategy(picks)
