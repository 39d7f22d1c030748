"""Graph documents (JSON) and GraphViz DOT export.

A graph document looks like::

    {
      "format_version": "1",
      "components": [{"id": "a", "label": "Optional", "meta": {"k": "v"}}, ...],
      "dependencies": [{"source": "a", "target": "b"}, ...]
    }

``label`` and ``meta`` are optional.  Serialization sorts components by id and
dependencies by ``(source, target)``, so equal graphs produce equal bytes.
"""

from __future__ import annotations

import enum
import json
from typing import Any

from migraph.errors import DocumentSyntaxError, SchemaError
from migraph.graph import Component, Dependency, MigrationGraph, condensation

__all__ = ["FORMAT_VERSION", "DotMode", "parse_graph", "serialize_graph", "graph_to_document", "export_dot"]

FORMAT_VERSION = "1"


def _expect(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise SchemaError(f"{where}: {what}")


def _check_keys(obj: dict, where: str, required: set[str], optional: set[str] = frozenset()) -> None:
    missing = required - obj.keys()
    _expect(not missing, where, f"missing key(s) {sorted(missing)}")
    extra = obj.keys() - required - optional
    _expect(not extra, where, f"unexpected key(s) {sorted(extra)}")


def parse_graph(text: bytes | str) -> MigrationGraph:
    """Parse a graph document and validate it into a :class:`MigrationGraph`.

    Raises:
        DocumentSyntaxError: not UTF-8 or not JSON (with line and column).
        SchemaError: JSON of the wrong shape (with the offending path).
        GraphError: any graph invariant violation, naming the element.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not valid UTF-8 at byte {exc.start}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    _expect(isinstance(doc, dict), "$", "document must be a JSON object")
    _check_keys(doc, "$", {"format_version", "components", "dependencies"})
    _expect(
        doc["format_version"] == FORMAT_VERSION,
        "$.format_version",
        f"unsupported version {doc['format_version']!r}, expected {FORMAT_VERSION!r}",
    )
    _expect(isinstance(doc["components"], list), "$.components", "must be an array")
    _expect(isinstance(doc["dependencies"], list), "$.dependencies", "must be an array")

    components = []
    for i, item in enumerate(doc["components"]):
        where = f"$.components[{i}]"
        _expect(isinstance(item, dict), where, "must be an object")
        _check_keys(item, where, {"id"}, {"label", "meta"})
        _expect(isinstance(item["id"], str), f"{where}.id", "must be a string")
        label = item.get("label")
        _expect(label is None or isinstance(label, str), f"{where}.label", "must be a string")
        meta = item.get("meta", {})
        _expect(isinstance(meta, dict), f"{where}.meta", "must be an object")
        _expect(all(isinstance(v, str) for v in meta.values()), f"{where}.meta", "values must be strings")
        components.append(Component(item["id"], label, meta))

    dependencies = []
    for i, item in enumerate(doc["dependencies"]):
        where = f"$.dependencies[{i}]"
        _expect(isinstance(item, dict), where, "must be an object")
        _check_keys(item, where, {"source", "target"})
        _expect(isinstance(item["source"], str), f"{where}.source", "must be a string")
        _expect(isinstance(item["target"], str), f"{where}.target", "must be a string")
        dependencies.append(Dependency(item["source"], item["target"]))

    return MigrationGraph(components, dependencies)


def graph_to_document(graph: MigrationGraph) -> dict[str, Any]:
    components = []
    for comp in graph.components:
        entry: dict[str, Any] = {"id": comp.id}
        if comp.label is not None:
            entry["label"] = comp.label
        if comp.meta:
            entry["meta"] = dict(sorted(comp.meta.items()))
        components.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "components": components,
        "dependencies": [{"source": d.source, "target": d.target} for d in graph.dependencies],
    }


def serialize_graph(graph: MigrationGraph) -> bytes:
    """Canonical UTF-8 JSON for *graph*, one component or dependency per line."""
    doc = graph_to_document(graph)
    lines = ["{", f'  "format_version": {json.dumps(doc["format_version"])},']
    for key, closing in (("components", ","), ("dependencies", "")):
        items = doc[key]
        if not items:
            lines.append(f'  "{key}": []{closing}')
            continue
        lines.append(f'  "{key}": [')
        body = [json.dumps(item, ensure_ascii=False) for item in items]
        lines.append(",\n".join(f"    {b}" for b in body))
        lines.append(f"  ]{closing}")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


class DotMode(enum.Enum):
    FLAT = "flat"
    CLUSTERED = "clustered"
    CONDENSED = "condensed"


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _node_line(comp: Component) -> str:
    if comp.label is not None:
        return f"{_q(comp.id)} [label={_q(comp.label)}];"
    return f"{_q(comp.id)};"


def export_dot(graph: MigrationGraph, mode: DotMode | str = DotMode.FLAT) -> bytes:
    """Render *graph* as a GraphViz digraph.

    ``flat`` draws components and dependencies as they are; ``clustered``
    additionally boxes every migration cluster in a dashed subgraph;
    ``condensed`` draws one node per cluster, labeled with its size.
    """
    mode = DotMode(mode)
    out = ["digraph migration {", "  rankdir=LR;"]
    comps = {c.id: c for c in graph.components}

    if mode is DotMode.CONDENSED:
        cond = condensation(graph)
        for i, cluster in enumerate(cond.clusters):
            noun = "component" if cluster.size == 1 else "components"
            label = f"{cluster.representative}\\n{cluster.size} {noun}"
            out.append(f'  "c{i}" [label="{label}", tooltip={_q(" ".join(cluster.members))}];')
        for a, b in cond.edges:
            out.append(f'  "c{a}" -> "c{b}";')
    else:
        if mode is DotMode.CLUSTERED:
            cond = condensation(graph)
            for i, cluster in enumerate(cond.clusters):
                out.append(f"  subgraph cluster_{i} {{")
                out.append(f'    style=dashed; label="c{i}";')
                out.extend(f"    {_node_line(comps[m])}" for m in cluster.members)
                out.append("  }")
        else:
            out.extend(f"  {_node_line(comps[cid])}" for cid in graph.ids)
        out.extend(f"  {_q(d.source)} -> {_q(d.target)};" for d in graph.dependencies)

    out.append("}")
    return ("\n".join(out) + "\n").encode("utf-8")
