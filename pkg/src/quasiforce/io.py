"""Graph files: JSON ({vertices, edges, labels}), graph6 and DOT."""

from __future__ import annotations

import json
from pathlib import Path

import networkx as nx

from quasiforce.graphs import GraphError, LabeledGraph, from_networkx


def graph_to_dict(G: LabeledGraph) -> dict:
    return {
        "vertices": G.vertex_count,
        "edges": [list(e) for e in G.edges],
        "labels": {str(lab): v for lab, v in G.labels},
    }


def graph_from_dict(data: dict) -> LabeledGraph:
    try:
        n = int(data["vertices"])
        edges = [(int(u), int(v)) for u, v in data.get("edges", [])]
        labels = {int(lab): int(v) for lab, v in data.get("labels", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    return LabeledGraph(
        n, tuple(sorted((min(u, v), max(u, v)) for u, v in edges)), tuple(sorted(labels.items()))
    )


def read_graph6(text: str) -> LabeledGraph:
    line = text.strip().splitlines()[0] if text.strip() else ""
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<") :]
    try:
        g = nx.from_graph6_bytes(line.encode("ascii"))
    except (ValueError, nx.NetworkXError) as exc:
        raise GraphError(f"malformed graph6 string: {exc}") from exc
    return from_networkx(g)


def write_graph6(G: LabeledGraph) -> str:
    return nx.to_graph6_bytes(G.to_networkx(), header=False).decode("ascii").strip()


def to_dot(G: LabeledGraph, name: str = "G") -> str:
    inv = {v: lab for lab, v in G.labels}
    lines = [f'graph "{name}" {{']
    for v in range(G.vertex_count):
        attr = f' [label="{v} ({inv[v]})", style=filled]' if v in inv else ""
        lines.append(f"  {v}{attr};")
    for u, v in G.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> LabeledGraph:
    """Read a graph from JSON, or from graph6 when the file is not JSON."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed graph JSON in {path}: {exc}") from exc
        return graph_from_dict(data)
    return read_graph6(text)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, so reruns are byte-identical."""
    return json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n"
