"""Immutable migration graphs and their structural operations.

A migration graph is a loop-free directed graph in which an edge ``v -> w``
means that ``v`` cannot be migrated before ``w`` (though possibly at the same
time).  Its strongly connected components are the *migration clusters*:
groups of components that have to be migrated together.

Every value in this module is immutable once built and every operation is a
pure function, so graphs can be shared freely between threads.  Node indices
follow the lexicographic order of component ids, which makes all set-valued
results come back in a canonical, byte-deterministic order.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import NamedTuple, Union

from migraph.errors import (
    DuplicateEdge,
    DuplicateId,
    GraphError,
    InvalidId,
    SelfLoop,
    UnknownComponent,
    UnknownEndpoint,
)

__all__ = [
    "Component",
    "Dependency",
    "MigrationGraph",
    "MigrationCluster",
    "CondensationGraph",
    "build_graph",
    "direct_dependencies",
    "dependencies_closure",
    "restrict",
    "cluster_of",
    "migratable_set",
    "is_migratable",
    "apply_migration",
    "condensation",
    "is_weakly_connected",
]

_BAD_ID_CHARS = re.compile(r'[\s"{}]')


def _check_id(value: object) -> str:
    if not isinstance(value, str) or not value:
        raise InvalidId(f"component id must be a non-empty string, got {value!r}")
    if _BAD_ID_CHARS.search(value):
        raise InvalidId(f"component id {value!r} contains whitespace or one of '\"{{}}'")
    return value


@dataclass(frozen=True)
class Component:
    """A node of a migration graph.

    ``meta`` is an opaque string map.  Keys such as ``sublevel_ref`` or
    ``negotiability`` are carried through serialization but never interpreted.
    """

    id: str
    label: str | None = None
    meta: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        _check_id(self.id)
        if self.label is not None and not isinstance(self.label, str):
            raise InvalidId(f"label of {self.id!r} must be a string")
        meta = dict(self.meta)
        for key, val in meta.items():
            if not isinstance(key, str) or not isinstance(val, str):
                raise InvalidId(f"meta of {self.id!r} must map strings to strings")
        object.__setattr__(self, "meta", MappingProxyType(meta))


class Dependency(NamedTuple):
    """The edge ``source -> target``: *source* depends on *target*."""

    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


ComponentLike = Union[Component, str]
DependencyLike = Union[Dependency, tuple[str, str]]

Adjacency = tuple[tuple[int, ...], ...]


class MigrationGraph:
    """A validated, immutable migration graph.

    Build instances with :func:`build_graph` (or the constructor, which does
    the same validation).  Internally nodes are addressed by their position in
    :attr:`ids`; :attr:`adjacency` and :attr:`reverse_adjacency` expose the
    index-level successor and predecessor lists for algorithms that need them.
    """

    __slots__ = ("_ids", "_index", "_components", "_succ", "_pred", "_edge_count")

    def __init__(
        self,
        components: Iterable[ComponentLike] = (),
        dependencies: Iterable[DependencyLike] = (),
    ) -> None:
        comps: dict[str, Component] = {}
        for pos, item in enumerate(components):
            comp = item if isinstance(item, Component) else Component(_check_id(item))
            if comp.id in comps:
                raise DuplicateId(f"components[{pos}]: duplicate component id {comp.id!r}")
            comps[comp.id] = comp

        ids = tuple(sorted(comps))
        index = {cid: i for i, cid in enumerate(ids)}
        succ: list[set[int]] = [set() for _ in ids]
        edge_count = 0
        for pos, dep in enumerate(dependencies):
            try:
                source, target = dep
            except (TypeError, ValueError):
                raise GraphError(f"dependencies[{pos}]: not a (source, target) pair: {dep!r}") from None
            where = f"dependencies[{pos}] ({source} -> {target})"
            if source not in index:
                raise UnknownEndpoint(f"{where}: unknown source {source!r}")
            if target not in index:
                raise UnknownEndpoint(f"{where}: unknown target {target!r}")
            if source == target:
                raise SelfLoop(f"{where}: self-loop on {source!r}")
            s, t = index[source], index[target]
            if t in succ[s]:
                raise DuplicateEdge(f"{where}: duplicate dependency")
            succ[s].add(t)
            edge_count += 1

        self._init(ids, index, tuple(comps[i] for i in ids), tuple(tuple(sorted(s)) for s in succ), edge_count)

    def _init(
        self,
        ids: tuple[str, ...],
        index: dict[str, int],
        components: tuple[Component, ...] | None,
        succ: Adjacency,
        edge_count: int,
    ) -> None:
        pred: list[list[int]] = [[] for _ in ids]
        for s, targets in enumerate(succ):
            for t in targets:
                pred[t].append(s)
        self._ids = ids
        self._index = index
        self._components = components
        self._succ = succ
        self._pred = tuple(tuple(p) for p in pred)
        self._edge_count = edge_count

    @classmethod
    def _trusted(
        cls,
        ids: tuple[str, ...],
        succ: Adjacency,
        components: tuple[Component, ...] | None = None,
    ) -> MigrationGraph:
        """Assemble a graph from pre-validated parts.

        *ids* must be sorted and unique, and every successor tuple sorted,
        loop-free and duplicate-free.  Used by generators and by
        :func:`restrict`, where the invariants hold by construction.
        """
        graph = cls.__new__(cls)
        graph._init(ids, {cid: i for i, cid in enumerate(ids)}, components, succ, sum(map(len, succ)))
        return graph

    # ---- read access ------------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def components(self) -> tuple[Component, ...]:
        if self._components is None:
            # generated graphs carry bare ids; materialize records on demand
            return tuple(Component(cid) for cid in self._ids)
        return self._components

    @property
    def dependencies(self) -> tuple[Dependency, ...]:
        ids = self._ids
        return tuple(Dependency(ids[s], ids[t]) for s, targets in enumerate(self._succ) for t in targets)

    @property
    def adjacency(self) -> Adjacency:
        return self._succ

    @property
    def reverse_adjacency(self) -> Adjacency:
        return self._pred

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def component(self, cid: str) -> Component:
        i = self.index(cid)
        if self._components is None:
            return Component(self._ids[i])
        return self._components[i]

    def index(self, cid: str) -> int:
        try:
            return self._index[cid]
        except (KeyError, TypeError):
            raise UnknownComponent(cid) from None

    def successors(self, cid: str) -> tuple[str, ...]:
        ids = self._ids
        return tuple(ids[t] for t in self._succ[self.index(cid)])

    def predecessors(self, cid: str) -> tuple[str, ...]:
        ids = self._ids
        return tuple(ids[s] for s in self._pred[self.index(cid)])

    def out_degree(self, cid: str) -> int:
        return len(self._succ[self.index(cid)])

    def in_degree(self, cid: str) -> int:
        return len(self._pred[self.index(cid)])

    def has_dependency(self, source: str, target: str) -> bool:
        if source not in self._index or target not in self._index:
            return False
        # successor tuples are short in practice; a linear scan is fine
        return self._index[target] in self._succ[self._index[source]]

    def __len__(self) -> int:
        return len(self._ids)

    def __iter__(self) -> Iterator[str]:
        return iter(self._ids)

    def __contains__(self, cid: object) -> bool:
        return cid in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MigrationGraph):
            return NotImplemented
        return (
            self._ids == other._ids
            and self._succ == other._succ
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash((self._ids, self._succ))

    def __repr__(self) -> str:
        return f"MigrationGraph({len(self._ids)} components, {self._edge_count} dependencies)"


def build_graph(
    components: Iterable[ComponentLike],
    dependencies: Iterable[DependencyLike],
) -> MigrationGraph:
    """Validate *components* and *dependencies* and return a migration graph.

    Raises:
        InvalidId: a component id is empty or contains whitespace or ``"{}``.
        DuplicateId: the same id is listed twice.
        UnknownEndpoint: a dependency references an id that is not listed.
        SelfLoop: a dependency has the same source and target.
        DuplicateEdge: the same ordered pair appears twice.
    """
    return MigrationGraph(components, dependencies)


# ---- reachability --------------------------------------------------------


def _reach(adj: Adjacency, start: int, within: set[int] | None = None) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen and (within is None or w in within):
                seen.add(w)
                todo.append(w)
    return seen


def _names(graph: MigrationGraph, indices: Iterable[int]) -> tuple[str, ...]:
    ids = graph.ids
    return tuple(ids[i] for i in sorted(indices))


def direct_dependencies(graph: MigrationGraph, v: str) -> tuple[str, ...]:
    """Return the components *v* points at directly."""
    return graph.successors(v)


def dependencies_closure(graph: MigrationGraph, v: str) -> tuple[str, ...]:
    """Return ``dep(v)``: everything reachable from *v*, including *v* itself."""
    return _names(graph, _reach(graph.adjacency, graph.index(v)))


def restrict(graph: MigrationGraph, members: Iterable[str]) -> MigrationGraph:
    """Return the subgraph induced by *members*."""
    keep = sorted({graph.index(cid) for cid in members})
    remap = {old: new for new, old in enumerate(keep)}
    succ = graph.adjacency
    new_succ = tuple(tuple(remap[t] for t in succ[old] if t in remap) for old in keep)
    ids = graph.ids
    comps = graph._components
    return MigrationGraph._trusted(
        tuple(ids[i] for i in keep),
        new_succ,
        None if comps is None else tuple(comps[i] for i in keep),
    )


# ---- migration clusters -------------------------------------------------


@dataclass(frozen=True)
class MigrationCluster:
    """A strongly connected block of components that migrate together.

    ``cluster_degree`` is the largest out-degree inside the subgraph induced
    by the members: 0 exactly for singletons, 1 exactly when the cluster is a
    single directed cycle.
    """

    members: tuple[str, ...]
    cluster_degree: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> str:
        return self.members[0]

    def __contains__(self, cid: object) -> bool:
        return cid in self.members

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)


def _cluster_degree(adj: Adjacency, members: set[int]) -> int:
    return max((sum(1 for w in adj[v] if w in members) for v in members), default=0)


def _local_cluster(graph: MigrationGraph, vi: int) -> tuple[set[int], set[int]]:
    """Return ``(c(v), dep(v))`` for node index *vi*."""
    forward = _reach(graph.adjacency, vi)
    # c(v) is the part of dep(v) that can also reach v
    cluster = _reach(graph.reverse_adjacency, vi, within=forward)
    return cluster, forward


def cluster_of(graph: MigrationGraph, v: str) -> MigrationCluster:
    """Return the migration cluster of *v*."""
    cluster, _ = _local_cluster(graph, graph.index(v))
    return MigrationCluster(_names(graph, cluster), _cluster_degree(graph.adjacency, cluster))


def migratable_set(graph: MigrationGraph, v: str) -> tuple[str, ...]:
    """Return ``m(v)``: the cluster of *v* if it has no outside dependency, else ``()``."""
    cluster, forward = _local_cluster(graph, graph.index(v))
    if len(forward) != len(cluster):
        return ()
    return _names(graph, cluster)


def is_migratable(graph: MigrationGraph, v: str) -> bool:
    return bool(migratable_set(graph, v))


def apply_migration(graph: MigrationGraph, v: str) -> MigrationGraph:
    """Migrate *v* together with its cluster.

    If *v* is not migratable the graph is returned unchanged.
    """
    migrated = set(migratable_set(graph, v))
    if not migrated:
        return graph
    return restrict(graph, (cid for cid in graph.ids if cid not in migrated))


# ---- condensation -------------------------------------------------------


def _tarjan(succ: Adjacency) -> tuple[list[int], int]:
    """Iterative Tarjan SCC.

    Returns ``(comp, count)``.  Components are numbered in the order Tarjan
    closes them, which is a reverse topological order: every edge between two
    components goes from the higher number to the lower one.
    """
    n = len(succ)
    order = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    count = 0
    for root in range(n):
        if order[root] != -1:
            continue
        order[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if order[w] == -1:
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and order[w] < low[v]:
                    low[v] = order[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == order[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = count
                    if w == v:
                        break
                count += 1
    return comp, count


@dataclass(frozen=True)
class CondensationGraph:
    """The acyclic quotient graph ``G/c``.

    Clusters are ordered by their smallest member id.  ``times[i]`` is the
    canonical migration time of cluster ``i``: one more than the length of the
    longest path leaving it, so clusters without outgoing edges have time 1.
    """

    clusters: tuple[MigrationCluster, ...]
    edges: tuple[tuple[int, int], ...]
    times: tuple[int, ...]
    membership: Mapping[str, int] = field(repr=False, compare=False)
    successors: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    predecessors: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.clusters)

    @property
    def depth(self) -> int:
        return max(self.times, default=0)

    @property
    def levels(self) -> tuple[tuple[int, ...], ...]:
        """Cluster indices grouped by canonical migration time, ``T(1)`` first."""
        buckets: list[list[int]] = [[] for _ in range(self.depth)]
        for i, t in enumerate(self.times):
            buckets[t - 1].append(i)
        return tuple(tuple(b) for b in buckets)

    @property
    def width(self) -> int:
        return max((len(level) for level in self.levels), default=0)

    def cluster_containing(self, cid: str) -> MigrationCluster:
        try:
            return self.clusters[self.membership[cid]]
        except KeyError:
            raise UnknownComponent(cid) from None


def condensation(graph: MigrationGraph) -> CondensationGraph:
    """Collapse every migration cluster of *graph* into a single node."""
    succ = graph.adjacency
    comp, count = _tarjan(succ)

    smallest = [len(succ)] * count
    for v, c in enumerate(comp):
        if v < smallest[c]:
            smallest[c] = v
    # canonical cluster order: by smallest member, i.e. lexicographic id
    order = sorted(range(count), key=smallest.__getitem__)
    rank = [0] * count
    for new, old in enumerate(order):
        rank[old] = new

    members: list[list[int]] = [[] for _ in range(count)]
    inner_degree = [0] * len(succ)
    out_edges: list[set[int]] = [set() for _ in range(count)]
    for v, targets in enumerate(succ):
        cv = comp[v]
        members[cv].append(v)
        for w in targets:
            cw = comp[w]
            if cw == cv:
                inner_degree[v] += 1
            else:
                out_edges[cv].add(cw)

    # Tarjan numbering is reverse-topological: successors are already final
    times_raw = [1] * count
    for c in range(count):
        if out_edges[c]:
            times_raw[c] = 1 + max(times_raw[d] for d in out_edges[c])

    ids = graph.ids
    clusters = []
    for old in order:
        mem = members[old]
        clusters.append(
            MigrationCluster(
                tuple(ids[v] for v in mem),
                max(inner_degree[v] for v in mem),
            )
        )
    edges = sorted((rank[c], rank[d]) for c in range(count) for d in out_edges[c])
    cond_succ: list[list[int]] = [[] for _ in range(count)]
    cond_pred: list[list[int]] = [[] for _ in range(count)]
    for a, b in edges:
        cond_succ[a].append(b)
        cond_pred[b].append(a)
    for p in cond_pred:
        p.sort()
    return CondensationGraph(
        clusters=tuple(clusters),
        edges=tuple(edges),
        times=tuple(times_raw[old] for old in order),
        membership=MappingProxyType({ids[v]: rank[c] for v, c in enumerate(comp)}),
        successors=tuple(map(tuple, cond_succ)),
        predecessors=tuple(map(tuple, cond_pred)),
    )


def is_weakly_connected(graph: MigrationGraph) -> bool:
    """Whether the underlying undirected graph is connected (true for the empty graph)."""
    n = len(graph)
    if n <= 1:
        return True
    succ, pred = graph.adjacency, graph.reverse_adjacency
    seen = [False] * n
    seen[0] = True
    todo = [0]
    reached = 1
    while todo:
        v = todo.pop()
        for nbrs in (succ[v], pred[v]):
            for w in nbrs:
                if not seen[w]:
                    seen[w] = True
                    reached += 1
                    todo.append(w)
    return reached == n
