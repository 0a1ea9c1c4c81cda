from __future__ import annotations

import json

import pytest

from quasiforce.graphs import GraphError, pendant, standard_graph
from quasiforce.io import dumps, graph_from_dict, graph_to_dict, load_graph, read_graph6, to_dot, write_graph6

TP = pendant(standard_graph("complete", 3), 1)


def test_json_round_trip():
    data = graph_to_dict(TP)
    assert data == {"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2]], "labels": {"0": 0, "1": 3}}
    assert graph_from_dict(json.loads(dumps(data))) == TP


def test_graph6_round_trip():
    text = write_graph6(TP)
    assert read_graph6(text) == TP.unlabeled()
    assert read_graph6(">>graph6<<" + text) == TP.unlabeled()


def test_dot_marks_labels():
    dot = to_dot(TP, "Tp")
    assert dot.startswith('graph "Tp" {')
    assert '3 [label="3 (1)"' in dot and "0 -- 3;" in dot


def test_load_graph_detects_format(tmp_path):
    j = tmp_path / "t.json"
    j.write_text(dumps(graph_to_dict(TP)))
    g6 = tmp_path / "t.g6"
    g6.write_text(write_graph6(TP) + "\n")
    assert load_graph(j) == TP
    assert load_graph(g6) == TP.unlabeled()


@pytest.mark.parametrize(
    "payload",
    ['{"edges": [[0, 1]]}', '{"vertices": 2, "edges": [[0, 0]]}', '{"vertices": 2, "edges": [[0, 1]', "not graph6 at all!"],
)
def test_malformed_files(tmp_path, payload):
    p = tmp_path / "bad"
    p.write_text(payload)
    with pytest.raises(GraphError):
        load_graph(p)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
