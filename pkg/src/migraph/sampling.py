"""Seeded random models: uniform set partitions and random migration graphs.

Every sampler takes a ``seed`` that is either a 64-bit integer, a
:class:`numpy.random.SeedSequence` or an existing
:class:`numpy.random.Generator`; the first two always yield identical output.
Sub-streams are derived with :meth:`SeedSequence.spawn`, so independent parts
of a sample never share random numbers.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln, logsumexp

from migraph.combinatorics import DEFAULT_BOUND, Partition, bell
from migraph.errors import OutOfRange
from migraph.graph import MigrationGraph

__all__ = [
    "SeedLike",
    "make_rng",
    "spawn_seeds",
    "block_count_pmf",
    "sample_block_count",
    "sample_uniform_partition",
    "sample_uniform_partitions",
    "ClusterStyle",
    "RandomGraphParams",
    "SyntheticGraph",
    "synthesize",
    "synthesize_migration_graph",
    "sample_er_dag",
    "component_ids",
]

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

# weights below this fraction of the largest one are dropped from the support
TAIL_CUTOFF = 1e-12
NORMALIZATION_TOL = 1e-9


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, (int, np.integer)) and not 0 <= int(seed) < 2**64:
        raise OutOfRange(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(seed)


def spawn_seeds(seed: int | np.random.SeedSequence, count: int) -> list[np.random.SeedSequence]:
    """Derive *count* independent child seeds; the split never depends on thread count."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return ss.spawn(count)


def _children(seed: SeedLike, count: int) -> list[np.random.Generator]:
    if isinstance(seed, np.random.Generator):
        return seed.spawn(count)
    return [np.random.default_rng(s) for s in spawn_seeds(seed, count)]


# ---- uniform set partitions ---------------------------------------------


@functools.lru_cache(maxsize=64)
def block_count_pmf(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and probabilities of the box count ``M`` for n items.

    ``P(M = m) = m**n / (e * m! * B_n)``.  The weights are evaluated in log
    space and the infinite support is cut where a weight falls below
    ``TAIL_CUTOFF`` times the largest one.  When ``B_n`` is available exactly
    (``n <= DEFAULT_BOUND``) the truncated mass is checked against
    ``e * B_n``.
    """
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    log_cut = math.log(TAIL_CUTOFF)
    hi = 16
    while True:
        m = np.arange(1, hi + 1, dtype=float)
        logw = n * np.log(m) - gammaln(m + 1.0) - 1.0
        peak = int(np.argmax(logw))
        if peak < hi - 1 and logw[-1] - logw[peak] < log_cut:
            break
        hi *= 2
    keep = logw - logw[peak] >= log_cut
    last = int(np.nonzero(keep)[0][-1]) + 1
    m, logw = m[:last], logw[:last]
    log_total = logsumexp(logw)
    if n <= DEFAULT_BOUND:
        log_bell = math.log(bell(n))
        if abs(log_total - log_bell) > NORMALIZATION_TOL:
            raise ArithmeticError(f"block count weights for n={n} do not sum to e*B_n")
    probs = np.exp(logw - log_total)
    probs /= probs.sum()
    support = m.astype(np.int64)
    support.flags.writeable = False
    probs.flags.writeable = False
    return support, probs


def sample_block_count(n: int, seed: SeedLike) -> int:
    """Draw the number of boxes ``M`` used by the uniform partition sampler."""
    support, probs = block_count_pmf(n)
    return int(make_rng(seed).choice(support, p=probs))


def _labels(n: int, rng: np.random.Generator) -> np.ndarray:
    support, probs = block_count_pmf(n)
    boxes = int(rng.choice(support, p=probs))
    return rng.integers(0, boxes, size=n)


def _blocks_from_labels(labels: np.ndarray) -> list[np.ndarray]:
    """Group item indices (0-based) by label, blocks ordered by first item."""
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    # relabel boxes by the position of their first item
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    canon = rank[inverse]
    order = np.argsort(canon, kind="stable")
    cuts = np.cumsum(np.bincount(canon))[:-1]
    return np.split(order, cuts)


def _partition_from_labels(labels: np.ndarray) -> Partition:
    blocks = tuple(tuple(int(i) + 1 for i in b) for b in _blocks_from_labels(labels))
    return Partition(blocks, len(labels))


def sample_uniform_partition(n: int, seed: SeedLike) -> Partition:
    """Draw a partition of ``{1, ..., n}`` uniformly among all ``B_n`` of them.

    Two stages: draw the box count ``M`` from :func:`block_count_pmf`, then
    throw each item into one of the ``M`` boxes independently and uniformly.
    The non-empty boxes form the partition.
    """
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    return _partition_from_labels(_labels(n, make_rng(seed)))


def sample_uniform_partitions(n: int, count: int, seed: SeedLike) -> list[Partition]:
    """Draw *count* independent uniform partitions from one stream."""
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    support, probs = block_count_pmf(n)
    rng = make_rng(seed)
    boxes = rng.choice(support, p=probs, size=count)
    return [_partition_from_labels(rng.integers(0, b, size=n)) for b in boxes]


# ---- random graphs --------------------------------------------------------


def component_ids(n: int, prefix: str = "c") -> tuple[str, ...]:
    """Zero-padded ids whose lexicographic order matches numeric order."""
    width = len(str(max(n, 1)))
    return tuple(f"{prefix}{i:0{width}d}" for i in range(1, n + 1))


def edge_probability(count: int, c: float) -> float:
    """``(ln count + c) / count`` clipped to ``[0, 1]``."""
    if count < 1:
        return 0.0
    return min(1.0, max(0.0, (math.log(count) + c) / count))


def _bernoulli_positions(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices in ``range(total)`` kept by independent Bernoulli(p) trials.

    Uses geometric gaps between successes, so the cost is proportional to
    the number of hits rather than to *total*.
    """
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    expected = total * p
    chunk = int(expected + 6 * math.sqrt(expected) + 32)
    hits = np.cumsum(rng.geometric(p, size=chunk), dtype=np.int64) - 1
    while hits[-1] < total:
        more = np.cumsum(rng.geometric(p, size=chunk), dtype=np.int64) + hits[-1]
        hits = np.concatenate([hits, more])
    return hits[hits < total]


def _unrank_pairs(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map ``t`` to pairs ``(lo, hi)`` with ``lo < hi``, enumerating row by row.

    Pair ``(lo, hi)`` has rank ``hi*(hi-1)/2 + lo``.
    """
    hi = ((1 + np.sqrt(1 + 8 * t.astype(np.float64))) // 2).astype(np.int64)
    # float rounding can be off by one for very large ranks
    hi -= hi * (hi - 1) // 2 > t
    hi += (hi + 1) * hi // 2 <= t
    lo = t - hi * (hi - 1) // 2
    return lo, hi


def _order_edges(count: int, p: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Random DAG on positions ``0..count-1``: edge ``i -> j`` only for ``i < j``."""
    hits = _bernoulli_positions(count * (count - 1) // 2, p, rng)
    return _unrank_pairs(hits)


def _assemble(n: int, sources: np.ndarray, targets: np.ndarray, prefix: str) -> MigrationGraph:
    """Build a graph on ``component_ids(n)`` from 0-based edge arrays."""
    ids = component_ids(n, prefix)
    succ: list[tuple[int, ...]] = [()] * n
    if len(sources):
        order = np.lexsort((targets, sources))
        s_sorted = sources[order]
        t_sorted = targets[order].tolist()
        starts = np.searchsorted(s_sorted, np.arange(n + 1)).tolist()
        succ = [tuple(t_sorted[starts[v]:starts[v + 1]]) for v in range(n)]
    return MigrationGraph._trusted(ids, tuple(succ))


def sample_er_dag(n: int, c: float, seed: SeedLike, prefix: str = "c") -> MigrationGraph:
    """Random acyclic graph: Erdős–Rényi edges consistent with a random linear order.

    Each of the ``n (n-1) / 2`` order-respecting pairs becomes an edge with
    probability ``(ln n + c) / n``.  Every cluster of the result is a
    singleton.
    """
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    rng = make_rng(seed)
    position_to_node = rng.permutation(n)
    lo, hi = _order_edges(n, edge_probability(n, c), rng)
    return _assemble(n, position_to_node[lo], position_to_node[hi], prefix)


class ClusterStyle(enum.Enum):
    """How a block of the sampled partition is made strongly connected."""

    CYCLE = "cycle"


@dataclass(frozen=True)
class RandomGraphParams:
    n: int
    c: float = 10.0
    seed: int = 0
    intra_cluster_style: ClusterStyle = ClusterStyle.CYCLE

    def __post_init__(self) -> None:
        if self.n < 1:
            raise OutOfRange(f"n must be at least 1, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise OutOfRange(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SyntheticGraph:
    """A synthesized graph together with the partition it was built from.

    Block ``{i, j, ...}`` of ``partition`` corresponds to the components
    ``ids[i-1], ids[j-1], ...`` of ``graph``.
    """

    graph: MigrationGraph
    partition: Partition

    def cluster_sets(self) -> set[frozenset[str]]:
        ids = self.graph.ids
        return {frozenset(ids[i - 1] for i in block) for block in self.partition.blocks}


def synthesize(params: RandomGraphParams, prefix: str = "c") -> SyntheticGraph:
    """Sample a migration graph whose clusters are a uniform random partition.

    1. Draw a uniform partition of the n components.
    2. Close every block of two or more members into one directed cycle over
       a random member order.
    3. Put the m blocks in a random linear order and link each
       order-respecting block pair with probability ``(ln m + c) / m``,
       realized as one edge between random members of the two blocks.

    Cross-block edges only follow the block order, so the clusters of the
    result are exactly the sampled blocks.
    """
    if params.intra_cluster_style is not ClusterStyle.CYCLE:
        raise ValueError(f"unsupported cluster style {params.intra_cluster_style}")
    n = params.n
    part_rng, cycle_rng, dag_rng = _children(params.seed, 3)

    blocks = _blocks_from_labels(_labels(n, part_rng))
    partition = Partition(tuple(tuple(int(i) + 1 for i in b) for b in blocks), n)

    sources: list[np.ndarray] = []
    targets: list[np.ndarray] = []
    for block in blocks:
        if len(block) >= 2:
            ring = cycle_rng.permutation(block)
            sources.append(ring)
            targets.append(np.roll(ring, -1))

    m = len(blocks)
    block_order = dag_rng.permutation(m)
    lo, hi = _order_edges(m, edge_probability(m, params.c), dag_rng)
    if len(lo):
        sizes = np.array([len(b) for b in blocks])
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        flat = np.concatenate(blocks)

        def members(block_ids: np.ndarray) -> np.ndarray:
            pick = (dag_rng.random(len(block_ids)) * sizes[block_ids]).astype(np.int64)
            return flat[offsets[block_ids] + pick]

        sources.append(members(block_order[lo]))
        targets.append(members(block_order[hi]))

    src = np.concatenate(sources) if sources else np.empty(0, dtype=np.int64)
    dst = np.concatenate(targets) if targets else np.empty(0, dtype=np.int64)
    return SyntheticGraph(_assemble(n, src, dst, prefix), partition)


def synthesize_migration_graph(params: RandomGraphParams) -> MigrationGraph:
    return synthesize(params).graph
