from __future__ import annotations

import json
import re

import pytest
from conftest import REPO, graphs
from hypothesis import given
from hypothesis import strategies as st

from migraph.errors import DocumentSyntaxError, DuplicateEdge, SchemaError, UnknownEndpoint
from migraph.fixtures import FIXTURES, fixture_bytes, load_fixture
from migraph.formats import DotMode, export_dot, parse_graph, serialize_graph
from migraph.graph import Component, build_graph, condensation
from migraph.sampling import RandomGraphParams, synthesize_migration_graph
from migraph.strategy import migration_length

MINIMAL = b'{"format_version":"1","components":[],"dependencies":[]}'


class TestParse:
    def test_fig1_fixture(self, fig1):
        assert parse_graph((REPO / "fixtures" / "fig1.json").read_bytes()) == fig1

    def test_empty(self):
        assert len(parse_graph(MINIMAL)) == 0
        assert len(parse_graph(MINIMAL.decode())) == 0

    def test_unknown_endpoint(self):
        doc = {"format_version": "1", "components": [{"id": "a"}], "dependencies": [{"source": "a", "target": "ghost"}]}
        with pytest.raises(UnknownEndpoint, match="ghost"):
            parse_graph(json.dumps(doc).encode())

    def test_duplicate_edge(self):
        doc = {
            "format_version": "1",
            "components": [{"id": "a"}, {"id": "b"}],
            "dependencies": [{"source": "a", "target": "b"}, {"source": "a", "target": "b"}],
        }
        with pytest.raises(DuplicateEdge):
            parse_graph(json.dumps(doc))

    def test_syntax_error_has_position(self):
        with pytest.raises(DocumentSyntaxError, match="line 2, column"):
            parse_graph(b'{"format_version": "1",\n  "components": [,]}')

    def test_not_utf8(self):
        with pytest.raises(DocumentSyntaxError, match="UTF-8"):
            parse_graph(b"\xff\xfe")

    @pytest.mark.parametrize(
        "doc, where",
        [
            ([], r"\$"),
            ({"components": [], "dependencies": []}, r"\$: missing"),
            ({"format_version": "2", "components": [], "dependencies": []}, r"\$\.format_version"),
            ({"format_version": "1", "components": {}, "dependencies": []}, r"\$\.components"),
            ({"format_version": "1", "components": [{"id": 3}], "dependencies": []}, r"\$\.components\[0\]\.id"),
            ({"format_version": "1", "components": [{"id": "a", "x": 1}], "dependencies": []}, r"unexpected"),
            ({"format_version": "1", "components": [{"id": "a", "meta": {"k": 1}}], "dependencies": []}, r"meta"),
            ({"format_version": "1", "components": [{"id": "a"}], "dependencies": [{"source": "a"}]}, r"dependencies\[0\]"),
        ],
    )
    def test_schema_errors(self, doc, where):
        with pytest.raises(SchemaError, match=where):
            parse_graph(json.dumps(doc))


class TestSerialize:
    def test_round_trip_fixtures(self):
        for name in FIXTURES:
            data = fixture_bytes(name)
            assert serialize_graph(parse_graph(data)) == data

    def test_fig1_canonical_bytes(self, fig1):
        assert serialize_graph(fig1) == (REPO / "fixtures" / "fig1.json").read_bytes()

    def test_empty_minimal(self):
        out = serialize_graph(build_graph([], []))
        assert json.loads(out) == json.loads(MINIMAL)
        assert out.endswith(b"\n")

    def test_preserves_labels_and_meta(self):
        g = build_graph([Component("a", "Alpha é", {"sublevel_ref": "other.json"})], [])
        back = parse_graph(serialize_graph(g))
        assert back.component("a").label == "Alpha é"
        assert back.component("a").meta == {"sublevel_ref": "other.json"}

    def test_bundled_fixtures_match_repository_copies(self):
        for name in FIXTURES:
            assert fixture_bytes(name) == (REPO / "fixtures" / f"{name}.json").read_bytes()

    def test_load_fixture_unknown(self):
        with pytest.raises(KeyError):
            load_fixture("nope")


@given(graphs())
def test_round_trip_arbitrary(g):
    data = serialize_graph(g)
    assert parse_graph(data) == g
    assert serialize_graph(parse_graph(data)) == data


@given(st.integers(1, 150), st.integers(0, 2**32))
def test_round_trip_synthesized(n, seed):
    g = synthesize_migration_graph(RandomGraphParams(n=n, seed=seed))
    assert parse_graph(serialize_graph(g)) == g


class TestDot:
    def test_fig1_clustered(self, fig1):
        dot = export_dot(fig1, DotMode.CLUSTERED).decode()
        assert dot.startswith("digraph migration {")
        assert len(re.findall(r"subgraph cluster_\d+ \{", dot)) == 9
        assert dot.count("style=dashed") == 9
        assert dot.count("->") == 15

    def test_fig1_condensed(self, fig1):
        dot = export_dot(fig1, "condensed").decode()
        assert len(re.findall(r'^  "c\d+" \[', dot, re.M)) == 9
        assert dot.count("->") == 8
        assert '"v7\\n3 components"' in dot

    def test_flat(self, fig1):
        dot = export_dot(fig1).decode()
        assert dot.count("->") == 15 and '"v12" -> "v9";' in dot

    def test_empty(self):
        assert export_dot(build_graph([], [])) == b"digraph migration {\n  rankdir=LR;\n}\n"

    def test_labels_are_escaped(self):
        g = build_graph([Component("a", 'say "hi"')], [])
        assert '[label="say \\"hi\\""]' in export_dot(g).decode()

    def test_deterministic(self, gitlab):
        for mode in DotMode:
            assert export_dot(gitlab, mode) == export_dot(load_fixture("gitlab"), mode)


@given(graphs())
def test_dot_counts_match_length(g):
    length = migration_length(g)
    condensed = export_dot(g, DotMode.CONDENSED).decode()
    clustered = export_dot(g, DotMode.CLUSTERED).decode()
    assert len(re.findall(r'^  "c\d+" \[', condensed, re.M)) == length
    assert clustered.count("subgraph cluster_") == length
    assert condensed.count("->") == len(condensation(g).edges)
