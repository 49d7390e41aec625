import json
import warnings
import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from rulial.cache import ExperimentSpec, GraphCache, graph_from_payload, graph_to_payload
from rulial.export import (GRAPH_FORMATS, export, growth_csv, read_csv_columns, render,
                           table_csv)
from rulial.machine import MachineSpec
from rulial.multiway import build_rulial_graph, directed_ball_counts


@pytest.fixture
def g1():
    return build_rulial_graph(MachineSpec(2, 2), t=1)


def test_json_first_step(g1):
    doc = json.loads(render(g1, "json"))
    assert doc["format"] == "rulial-graph" and doc["version"] == 1
    assert len(doc["nodes"]) == 9 and len(doc["edges"]) == 8
    keys = [n["key"] for n in doc["nodes"]]
    assert keys == sorted(keys)


@pytest.mark.parametrize("fmt", GRAPH_FORMATS)
def test_empty_graph_is_valid(fmt):
    text = render(nx.DiGraph(), fmt)
    if fmt == "json":
        assert json.loads(text)["nodes"] == []
    elif fmt == "graphml":
        root = ET.fromstring(text)
        assert root.find("{http://graphml.graphdrawing.org/xmlns}graph") is not None
    else:
        assert text.strip().endswith("}") and "digraph" in text


def test_graphml_reads_back(g1):
    text = render(g1, "graphml")
    back = nx.parse_graphml(text)
    assert back.number_of_nodes() == 9
    assert back.number_of_edges() == 8


def test_dot_lists_every_edge(g1):
    text = render(g1, "dot")
    assert text.startswith("// rulial-graph version 1")
    assert text.count("->") == 8 + 8  # edge arrows plus micro-rule labels


def test_undirected_export_orders_endpoints():
    g = nx.Graph()
    g.add_edge("b", "a")
    doc = json.loads(render(g, "json"))
    assert doc["edges"] == [{"src": "a", "dst": "b"}]


@pytest.mark.parametrize("fmt", GRAPH_FORMATS)
def test_byte_identical_across_workers(fmt):
    spec = MachineSpec(2, 2)
    a = render(build_rulial_graph(spec, t=5), fmt)
    b = render(build_rulial_graph(spec, t=5, workers=4), fmt)
    assert a == b


def test_unknown_format(g1):
    with pytest.raises(ValueError):
        render(g1, "svg")
    with pytest.raises(TypeError):
        render(object(), "json")


def test_export_writes_file(tmp_path, g1):
    p = export(g1, "json", tmp_path / "g.json")
    assert json.loads(p.read_text())["directed"] is True


def test_csv_helpers():
    text = growth_csv(directed_ball_counts(MachineSpec(2, 2), t_max=3))
    assert text.splitlines()[0].startswith("# rulial growth") and "version 1" in text
    assert read_csv_columns(text) == {"t": [0, 1, 2, 3], "count": [1, 9, 36, 100]}
    assert table_csv(["a"], [[1]]) == "a\n1\n"


def exp(**kw):
    base = dict(command="build", s=2, k=2, steps=3)
    base.update(kw)
    return ExperimentSpec(**base)


def test_spec_json_round_trip():
    e = exp(rules=(1, 2), extra=(("check", "x"),), output="o.json")
    assert ExperimentSpec.from_json(e.to_json()) == e


def test_spec_validation():
    with pytest.raises(ValueError):
        exp(workers=0)
    with pytest.raises(ValueError):
        exp(tape="cyclic")  # missing n
    with pytest.raises(ValueError):
        exp(steps=-1)


def test_cache_key_ignores_output_and_workers():
    assert exp().cache_key() == exp(output="x", workers=4, fmt="dot").cache_key()
    assert exp().cache_key() != exp(steps=4).cache_key()


def test_cap_only_keys_truncated_results():
    assert exp(max_nodes=10).cache_key() == exp(max_nodes=20).cache_key()
    assert exp(max_nodes=10).cache_key(True) != exp(max_nodes=20).cache_key(True)


def test_put_then_get(tmp_path):
    e = exp()
    g = build_rulial_graph(e.machine(), t=3)
    cache = GraphCache(tmp_path)
    assert cache.get(e) is None
    cache.put(e, g)
    back = cache.get(e)
    assert back.layer == g.layer and back.sorted_edges() == g.sorted_edges()
    for fmt in GRAPH_FORMATS:
        assert render(back, fmt) == render(g, fmt)


def test_cache_env_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("RULIAL_CACHE_DIR", str(tmp_path / "env"))
    assert GraphCache().directory == tmp_path / "env"


def test_truncated_entries_depend_on_cap(tmp_path):
    cache = GraphCache(tmp_path)
    e = exp(steps=8, max_nodes=100)
    g = build_rulial_graph(e.machine(), t=8, max_nodes=100, on_cap="truncate")
    assert g.truncated
    cache.put(e, g)
    assert cache.get(e) is not None
    assert cache.get(exp(steps=8, max_nodes=200)) is None


def test_complete_graph_over_cap_not_served(tmp_path):
    cache = GraphCache(tmp_path)
    e = exp()
    cache.put(e, build_rulial_graph(e.machine(), t=3))
    assert cache.get(exp(max_nodes=10)) is None


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = GraphCache(tmp_path)
    e = exp()
    path = cache.put(e, build_rulial_graph(e.machine(), t=3))
    path.write_text("{not json")
    with pytest.warns(UserWarning):
        assert cache.get(e) is None
    path.write_text(json.dumps({"version": 99}))
    with pytest.warns(UserWarning):
        assert cache.get(e) is None


def test_payload_round_trip_finite_tape():
    g = build_rulial_graph(MachineSpec(1, 2, tape="cyclic", n=3))
    back = graph_from_payload(graph_to_payload(g))
    assert back.saturated and back.layer == g.layer and back.depth == g.depth
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert render(back, "json") == render(g, "json")
