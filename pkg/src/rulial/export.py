"""Deterministic graph and table writers.

Every writer sorts nodes by key and edges by (source, target, attributes), so
the same graph always produces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from pathlib import Path

import networkx as nx

FORMAT_VERSION = 1
GRAPH_FORMATS = ("dot", "graphml", "json")


def as_networkx(graph) -> nx.Graph:
    if isinstance(graph, nx.Graph):
        return graph
    if hasattr(graph, "to_networkx"):
        return graph.to_networkx()
    raise TypeError(f"cannot export {type(graph).__name__}")


def _sorted_nodes(g: nx.Graph):
    return sorted(g.nodes(data=True), key=lambda nd: str(nd[0]))


def _sorted_edges(g: nx.Graph):
    def order(e):
        a, b, d = e
        return str(a), str(b), sorted((k, str(v)) for k, v in d.items())

    out = []
    for a, b, d in g.edges(data=True):
        if not g.is_directed() and str(b) < str(a):
            a, b = b, a
        out.append((a, b, d))
    return sorted(out, key=order)


def to_json(graph) -> str:
    g = as_networkx(graph)
    doc = {
        "format": "rulial-graph",
        "version": FORMAT_VERSION,
        "directed": g.is_directed(),
        "nodes": [{"key": str(n), **d} for n, d in _sorted_nodes(g)],
        "edges": [{"src": str(a), "dst": str(b), **d} for a, b, d in _sorted_edges(g)],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _dot_id(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_attrs(d: dict) -> str:
    if not d:
        return ""
    parts = []
    for k, v in sorted(d.items()):
        if isinstance(v, bool):
            v = str(v).lower()
        parts.append(f"{k}={_dot_id(v)}")
    return " [" + ", ".join(parts) + "]"


def to_dot(graph) -> str:
    g = as_networkx(graph)
    kind, arrow = ("digraph", "->") if g.is_directed() else ("graph", "--")
    lines = [f"// rulial-graph version {FORMAT_VERSION}", f"{kind} G {{"]
    for n, d in _sorted_nodes(g):
        lines.append(f"  {_dot_id(n)}{_dot_attrs(d)};")
    for a, b, d in _sorted_edges(g):
        lines.append(f"  {_dot_id(a)} {arrow} {_dot_id(b)}{_dot_attrs(d)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml_type(v) -> str:
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, int):
        return "long"
    if isinstance(v, float):
        return "double"
    return "string"


def _graphml_value(v) -> str:
    return str(v).lower() if isinstance(v, bool) else str(v)


def to_graphml(graph) -> str:
    g = as_networkx(graph)
    nodes, edges = _sorted_nodes(g), _sorted_edges(g)
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    keys = {}
    for domain, items in (("node", [d for _, d in nodes]), ("edge", [d for *_, d in edges])):
        names = {}
        for d in items:
            for k, v in d.items():
                names.setdefault(k, _graphml_type(v))
        for k in sorted(names):
            kid = f"{domain[0]}_{k}"
            keys[domain, k] = kid
            ET.SubElement(root, "key", {"id": kid, "for": domain, "attr.name": k,
                                        "attr.type": names[k]})
    ET.SubElement(root, "key", {"id": "g_version", "for": "graph", "attr.name": "version",
                                "attr.type": "int"})
    gel = ET.SubElement(root, "graph", id="G",
                        edgedefault="directed" if g.is_directed() else "undirected")
    ET.SubElement(gel, "data", key="g_version").text = str(FORMAT_VERSION)
    for n, d in nodes:
        el = ET.SubElement(gel, "node", id=str(n))
        for k in sorted(d):
            ET.SubElement(el, "data", key=keys["node", k]).text = _graphml_value(d[k])
    for a, b, d in edges:
        el = ET.SubElement(gel, "edge", source=str(a), target=str(b))
        for k in sorted(d):
            ET.SubElement(el, "data", key=keys["edge", k]).text = _graphml_value(d[k])
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


_WRITERS = {"dot": to_dot, "graphml": to_graphml, "json": to_json}


def render(graph, fmt: str) -> str:
    try:
        return _WRITERS[fmt](graph)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(GRAPH_FORMATS)}") from None


def export(graph, fmt: str, path) -> Path:
    path = Path(path)
    path.write_text(render(graph, fmt), encoding="utf-8")
    return path


def table_csv(columns: list[str], rows, header: str | None = None) -> str:
    buf = io.StringIO()
    if header:
        buf.write(f"# {header}; version {FORMAT_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def growth_csv(seq) -> str:
    spec = seq.spec
    header = f"rulial growth s={spec.s} k={spec.k} mode={seq.mode}"
    return table_csv(["t", "count"], enumerate(seq.counts), header)


def reach_csv(profile) -> str:
    spec = profile.spec
    rows = zip(range(profile.t_max + 1), profile.cumulative, profile.novel)
    return table_csv(["t", "cumulative", "novel"], rows,
                     f"rulial deterministic reach s={spec.s} k={spec.k}")


def ca_counts_csv(graph) -> str:
    return table_csv(["t", "new_config_count"], enumerate(graph.counts),
                     f"rulial ca reach rules={len(graph.rules)}")


def multiplication_table_csv(table: list[list[int]]) -> str:
    return table_csv(["row"] + [str(j) for j in range(len(table))],
                     ([i] + row for i, row in enumerate(table)), "rulial multiplication table")


def read_csv_columns(text: str) -> dict[str, list[int]]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    cols: dict[str, list[int]] = {name: [] for name in reader.fieldnames or []}
    for row in reader:
        for k, v in row.items():
            cols[k].append(int(v))
    return cols
