"""Dependency analysis and migration planning for component graphs.

A migration graph has an edge ``v -> w`` when ``v`` cannot be migrated
before ``w``.  Its strongly connected components are the migration clusters;
the package computes them, orders them into a canonical plan, samples random
graphs with known cluster structure and compares observed metrics with
closed-form predictions.
"""

from migraph.combinatorics import Partition, bell, block_count_probability, partition_probability, stirling2
from migraph.errors import *  # noqa: F401,F403
from migraph.estimates import (
    ClusterStatistics,
    connectivity_probability,
    expected_max_cluster_size,
    expected_stats,
    max_clusters_bound,
    monte_carlo_report,
)
from migraph.fixtures import load_fixture
from migraph.formats import DotMode, export_dot, parse_graph, serialize_graph
from migraph.graph import (
    Component,
    CondensationGraph,
    Dependency,
    MigrationCluster,
    MigrationGraph,
    apply_migration,
    build_graph,
    cluster_of,
    condensation,
    dependencies_closure,
    direct_dependencies,
    is_migratable,
    migratable_set,
)
from migraph.patterns import PatternKind, detect_patterns
from migraph.reports import compare_report
from migraph.sampling import RandomGraphParams, sample_uniform_partition, synthesize, synthesize_migration_graph
from migraph.strategy import (
    Strategy,
    canonical_plan,
    is_reasonable,
    is_successful,
    migration_depth,
    migration_length,
)

__version__ = "0.1.0"
