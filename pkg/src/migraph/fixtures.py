"""Bundled example graphs.

``fig1``
    A twelve-component example with nine clusters and depth five.
``gitlab``
    A 19-component model of a self-managed GitLab installation.  It is a
    reconstruction: the cluster sizes, depth and the two longest dependency
    chains are fixed, the remaining links are plausible choices.
"""

from __future__ import annotations

from importlib import resources

from migraph.formats import parse_graph
from migraph.graph import MigrationGraph

__all__ = ["FIXTURES", "fixture_bytes", "load_fixture"]

FIXTURES = ("fig1", "gitlab")


def fixture_bytes(name: str) -> bytes:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files("migraph").joinpath("data", f"{name}.json").read_bytes()


def load_fixture(name: str) -> MigrationGraph:
    """Parse one of the bundled fixtures by name."""
    return parse_graph(fixture_bytes(name))
