"""Closed-form complexity estimates for random migration graphs, and a
seeded Monte Carlo harness to compare them against samples.

All logarithms are natural logarithms.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy.special import lambertw

from migraph.combinatorics import bell
from migraph.errors import NoConvergence, OutOfRange
from migraph.sampling import _labels, spawn_seeds

__all__ = [
    "ClusterStatistics",
    "LowSampleWarning",
    "expected_stats",
    "exact_block_count_moments",
    "max_clusters_bound",
    "size_scale_root",
    "expected_max_cluster_size",
    "connectivity_probability",
    "expected_edge_count",
    "depth_lower_bound",
    "monte_carlo_report",
]


class LowSampleWarning(UserWarning):
    """Too few Monte Carlo trials for a meaningful spread estimate."""


@dataclass(frozen=True)
class ClusterStatistics:
    """Predicted cluster metrics for n components, optionally with observations.

    The expected fields are ``ln n``, ``n / ln n``, ``sqrt(n) / ln n``,
    ``n / ln(n)**2`` and ``sqrt(n)``.  Observed fields are filled either from
    a concrete graph (cluster count, mean and sample SD of cluster sizes,
    depth) or from Monte Carlo trials (mean and SD of the block count).
    """

    n: int
    expected_cluster_size: float | None
    expected_cluster_count: float | None
    cluster_count_sd: float | None
    depth_conservative: float | None
    depth_optimistic: float | None
    observed_cluster_count: float | None = None
    observed_count_sd: float | None = None
    observed_mean_size: float | None = None
    observed_size_sd: float | None = None
    observed_depth: int | None = None
    trials: int | None = None
    low_sample: bool = False


def expected_stats(n: int) -> ClusterStatistics:
    if n < 2:
        raise OutOfRange(f"expected statistics need n >= 2, got {n}")
    ln = math.log(n)
    root = math.sqrt(n)
    return ClusterStatistics(
        n=n,
        expected_cluster_size=ln,
        expected_cluster_count=n / ln,
        cluster_count_sd=root / ln,
        depth_conservative=n / ln**2,
        depth_optimistic=root,
    )


def exact_block_count_moments(n: int) -> tuple[float, float]:
    """Exact mean and SD of the block count of a uniform partition of n items.

    ``E[K] = B_{n+1}/B_n - 1`` and ``Var[K] = B_{n+2}/B_n - (B_{n+1}/B_n)**2 - 1``,
    evaluated in exact rational arithmetic.
    """
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    b0, b1, b2 = bell(n), bell(n + 1), bell(n + 2)
    mean = Fraction(b1, b0) - 1
    var = Fraction(b2, b0) - Fraction(b1, b0) ** 2 - 1
    return float(mean), math.sqrt(var)


def max_clusters_bound(n: int, s: int) -> float:
    """Upper bound on the expected largest cluster count among s random projects:
    ``n / ln n + sqrt(2 n ln s) / ln n``."""
    if n < 2:
        raise OutOfRange(f"n must be at least 2, got {n}")
    if s < 1:
        raise OutOfRange(f"s must be at least 1, got {s}")
    ln = math.log(n)
    return n / ln + math.sqrt(2 * n * math.log(s)) / ln


def size_scale_root(n: float) -> float:
    """Solve ``r * exp(r) = n`` for r (the principal Lambert W branch)."""
    if not n > 0:
        raise OutOfRange(f"n must be positive, got {n}")
    r = float(lambertw(n).real)
    # one Newton step on r + ln r = ln n tightens the last ulp
    r -= (r + math.log(r) - math.log(n)) / (1 + 1 / r)
    if not math.isfinite(r) or abs(r * math.exp(r) - n) > 1e-12 * n:
        raise NoConvergence(f"could not solve r*exp(r) = {n}")
    return r


def expected_max_cluster_size(n: float) -> float:
    """Asymptotic expected size of the largest cluster: ``e r - ln sqrt(r)``."""
    if n < math.e:
        raise OutOfRange(f"n must be at least e, got {n}")
    r = size_scale_root(n)
    return math.e * r - 0.5 * math.log(r)


def connectivity_probability(c: float) -> float:
    """Limit probability ``exp(-exp(-c))`` that a random DAG is connected."""
    if -c > 700:
        # exp(-c) would overflow; the result is far below the smallest double
        return 0.0
    return math.exp(-math.exp(-c))


def expected_edge_count(n: int, c: float) -> float:
    """Expected edges of an order-respecting random DAG with p = (ln n + c)/n."""
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    p = min(1.0, max(0.0, (math.log(n) + c) / n))
    return p * n * (n - 1) / 2


def depth_lower_bound(n_prime: int, w: float) -> float:
    """Minimum depth of a condensation with n' clusters whose levels hold at most w each."""
    if n_prime < 1:
        raise OutOfRange(f"n' must be at least 1, got {n_prime}")
    if not w > 0:
        raise OutOfRange(f"w must be positive, got {w}")
    return n_prime / w


def _block_counts(n: int, seeds: Sequence[np.random.SeedSequence]) -> list[int]:
    counts = []
    for ss in seeds:
        labels = _labels(n, np.random.default_rng(ss))
        counts.append(int(np.count_nonzero(np.bincount(labels))))
    return counts


def monte_carlo_report(n: int, trials: int, seed: int, workers: int = 1) -> ClusterStatistics:
    """Sample *trials* uniform partitions of n items and summarize their block counts.

    Trial i always uses the i-th child of *seed*, so the report is the same
    for any number of *workers*.  With a single trial the SD is reported as 0
    and a :class:`LowSampleWarning` is issued.
    """
    if n < 2:
        raise OutOfRange(f"n must be at least 2, got {n}")
    if trials < 1:
        raise OutOfRange(f"trials must be at least 1, got {trials}")
    seeds = spawn_seeds(seed, trials)
    if workers > 1 and trials > 1:
        chunks = [seeds[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_counts, [n] * workers, chunks))
        counts = [0] * trials
        for i, part in enumerate(parts):
            counts[i::workers] = part
    else:
        counts = _block_counts(n, seeds)

    arr = np.asarray(counts, dtype=float)
    low = trials < 2
    if low:
        warnings.warn(f"only {trials} trial; standard deviation reported as 0", LowSampleWarning, stacklevel=2)
    return replace(
        expected_stats(n),
        observed_cluster_count=float(arr.mean()),
        observed_count_sd=0.0 if low else float(arr.std(ddof=1)),
        observed_mean_size=float(np.mean(n / arr)),
        trials=trials,
        low_sample=low,
    )
