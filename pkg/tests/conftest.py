from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from migraph import build_graph, load_fixture  # noqa: E402

REPO = Path(__file__).resolve().parents[1]

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIG1_EDGES = [
    ("v12", "v9"), ("v11", "v9"), ("v10", "v9"), ("v8", "v9"), ("v9", "v7"),
    ("v7", "v8"), ("v8", "v6"), ("v7", "v5"), ("v5", "v6"), ("v6", "v5"),
    ("v6", "v4"), ("v5", "v4"), ("v4", "v3"), ("v4", "v2"), ("v4", "v1"),
]
FIG1_NODES = [f"v{i}" for i in range(1, 13)]


@pytest.fixture(scope="session")
def fig1():
    return build_graph(FIG1_NODES, FIG1_EDGES)


@pytest.fixture(scope="session")
def gitlab():
    return load_fixture("gitlab")


@st.composite
def graphs(draw, max_nodes: int = 9, max_edges: int = 25):
    """Small arbitrary migration graphs (any shape, cycles included)."""
    n = draw(st.integers(0, max_nodes))
    nodes = [f"n{i}" for i in range(n)]
    if n < 2:
        return build_graph(nodes, [])
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.sets(pairs, max_size=max_edges))
    return build_graph(nodes, [(nodes[a], nodes[b]) for a, b in edges])


# ---- acceptance summary -------------------------------------------------

_AC_RESULTS: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        # a criterion split over several tests passes only if all of them do
        if _AC_RESULTS.get(label) != "FAIL":
            _AC_RESULTS[label] = status


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by this test")


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_AC_RESULTS, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{_AC_RESULTS[label]}  {label}")
