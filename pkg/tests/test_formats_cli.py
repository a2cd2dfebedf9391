import io
import json
import subprocess
import sys
from fractions import Fraction

import pydot
import pytest
from hypothesis import given, settings, strategies as st

from ramseyspace import (
    BranchingTree,
    greedy_find_copy,
    mono_subtree,
    oracle_find_copy,
    regularize,
    ultrametric_to_tree,
    validate_metric,
)
from ramseyspace import formats
from ramseyspace.cli import run
from ramseyspace.dot import to_dot
from ramseyspace.generators import generate_random_ultrametric, random_coloring, random_metric

F = Fraction


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def cli(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


TWO = {"points": ["a", "b"], "distances": [["0", "1"], ["1", "0"]]}
T122 = {"points": ["a", "b", "c"], "distances": [["0", "1", "2"], ["1", "0", "2"], ["2", "2", "0"]]}


# round trips

@given(st.integers(0, 10**6), st.integers(1, 8))
@settings(max_examples=50, deadline=None)
def test_space_round_trip(seed, n):
    X = random_metric(seed, n, values=(1, F(3, 2), 2, 5))
    assert formats.space_from_json(formats.loads(formats.dumps(formats.space_to_json(X)))) == X


@given(st.integers(0, 10**6), st.integers(1, 8))
@settings(max_examples=50, deadline=None)
def test_tree_round_trip(seed, n):
    w = regularize(ultrametric_to_tree(generate_random_ultrametric(seed, n, [1, F(3, 2), 2])))
    doc = formats.loads(formats.dumps(formats.witness_to_json(w)))
    tree, leaf_map = formats.tree_from_json(doc)
    assert tree.nodes == w.tree.nodes and tree.h == w.tree.h and tree.parent_map() == w.tree.parent_map()
    assert leaf_map == w.leaf_map
    assert [F(v) for v in doc["level_values"]] == list(w.level_values)


def test_coloring_and_certificate_round_trips():
    chi = {"a": 0, "b": 2}
    assert formats.coloring_from_json(formats.coloring_to_json(chi)) == chi
    X = validate_metric([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ["a", "b", "c"])
    found = oracle_find_copy(X, {p: 0 for p in X.points}, X)
    color, cert = formats.copy_cert_from_json(formats.loads(formats.dumps(formats.copy_cert_to_json(found.color, found.cert))))
    assert (color, cert) == (found.color, found.cert)
    t = BranchingTree.complete(3, 2)
    mc = mono_subtree(t, {v: 0 for v in t.leaves}, 2)
    assert formats.mono_cert_from_json(formats.mono_cert_to_json(mc)) == mc


@pytest.mark.parametrize("seed", range(20))
def test_obstruction_round_trip(seed):
    X = random_metric(seed, 7, values=(1, 2, 4))
    K = validate_metric([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    chi = random_coloring(seed, X.points, 3)
    ob = greedy_find_copy(X, chi, K)
    if hasattr(ob, "stages"):
        back = formats.obstruction_from_json(formats.loads(formats.dumps(formats.obstruction_to_json(ob))))
        assert back == ob


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"points": ["a"], "distances": [[0.0]]}', "floating-point"),
        ('{"points": ["a"], "distances": [["1/0"]]}', "distances[0][0]"),
        ('{"points": ["a"]}', "distances"),
        ('{"points": ["a"],\n "distances": [[0]', "line 2"),
        ('{"points": [1], "distances": [[0]]}', "points[0]"),
    ],
)
def test_parse_errors_name_the_place(doc, fragment):
    with pytest.raises(formats.FormatError) as err:
        formats.space_from_json(formats.loads(doc))
    assert fragment in str(err.value)


def test_branching_tree_requires_uniform_depth():
    doc = {"nodes": [{"id": "r", "parent": None}, {"id": "a", "parent": "r"}, {"id": "b", "parent": "a"}, {"id": "c", "parent": "r"}]}
    with pytest.raises(formats.FormatError):
        formats.branching_tree_from_json(doc)


# DOT

@pytest.mark.parametrize("seed", range(10))
def test_dot_is_valid(seed):
    w = regularize(ultrametric_to_tree(generate_random_ultrametric(seed, 2 + seed, [1, 2, 3])))
    text = to_dot(w.tree, {leaf: i % 3 for i, leaf in enumerate(w.tree.leaves)}, [w.tree.root])
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs[0].get_nodes()) >= len(w.tree.nodes)
    assert len(graphs[0].get_edges()) == len(w.tree.nodes) - 1


# CLI

def test_validate_two_points(tmp_path):
    code, out, err = cli("validate", "--space", write(tmp_path, "s.json", TWO))
    assert code == 0 and err == ""
    assert json.loads(out)["ultrametric"] is True


def test_validate_reports_violation(tmp_path):
    bad = {"points": ["a", "b", "c"], "distances": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]]}
    code, out, _ = cli("validate", "--space", write(tmp_path, "s.json", bad))
    assert code == 1 and json.loads(out)["violation"]["axiom"] == "triangle"
    non_ultra = {"points": ["a", "b", "c"], "distances": [["0", "1", "2"], ["1", "0", "3/2"], ["2", "3/2", "0"]]}
    path = write(tmp_path, "n.json", non_ultra)
    assert cli("validate", "--space", path)[0] == 0
    assert cli("validate", "--space", path, "--ultrametric")[0] == 1


def test_invalid_input_exit_two(tmp_path):
    code, out, err = cli("validate", "--space", write(tmp_path, "s.json", '{"points": ["a"], "distances": [[0.5]]}'))
    assert code == 2 and out == "" and "floating-point" in err
    assert cli("validate", "--space", str(tmp_path / "missing.json"))[0] == 2


def test_unknown_subcommand():
    assert cli("frobnicate")[0] == 2
    code, _, err = cli()
    assert code == 2 and "usage" in err


def test_isosceles(tmp_path):
    code, out, _ = cli("isosceles", "--space", write(tmp_path, "s.json", T122))
    assert code == 0
    assert json.loads(out)["triangles"] == [{"apex": "c", "base": ["a", "b"], "base_length": "1", "leg_length": "2"}]


def test_to_tree_and_back(tmp_path):
    space = write(tmp_path, "s.json", T122)
    tree = str(tmp_path / "t.json")
    assert cli("--output", tree, "to-tree", "--space", space, "--regular")[0] == 0
    doc = json.loads(open(tree).read())
    assert doc["level_values"] == ["2", "1"]
    code, out, _ = cli("tree-metric", "--tree", tree)
    assert code == 0 and json.loads(out) == T122
    code, out, _ = cli("export-dot", "--tree", tree)
    assert code == 0 and pydot.graph_from_dot_data(out)


def test_extend(tmp_path):
    space = write(tmp_path, "s.json", TWO)
    reqs = write(tmp_path, "r.json", [{"id": "p", "support": ["a"], "values": {"a": "3/2"}}, {"id": "q", "support": ["a"], "values": {"a": "3/2"}}])
    code, out, _ = cli("extend", "--space", space, "--requests", reqs)
    assert code == 0 and json.loads(out)["points"] == ["a", "b", "p"]
    code, out, _ = cli("extend", "--space", space, "--requests", reqs, "--no-reuse")
    assert code == 0 and json.loads(out)["points"] == ["a", "b", "p", "q"]
    bad = write(tmp_path, "b.json", [{"id": "p", "support": ["a", "b"], "values": {"a": "1", "b": "5"}}])
    code, _, err = cli("extend", "--space", space, "--requests", bad)
    assert code == 2 and "request 0" in err


def test_find_copy_negative_greedy_gives_obstruction(tmp_path):
    space = write(tmp_path, "s.json", T122)
    target = write(tmp_path, "k.json", TWO)
    coloring = write(tmp_path, "c.json", {"colors": {"a": 0, "b": 1, "c": 2}})
    X = formats.space_from_json(T122)
    assert oracle_find_copy(X, {"a": 0, "b": 1, "c": 2}, formats.space_from_json(TWO)) is None
    code, out, _ = cli("find-copy", "--space", space, "--coloring", coloring, "--target", target, "--mode", "greedy")
    doc = json.loads(out)
    assert code == 1 and doc["found"] is False and len(doc["obstruction"]["stages"]) == 3
    assert cli("find-copy", "--space", space, "--coloring", coloring, "--target", target)[0] == 1


def test_find_copy_positive(tmp_path):
    space = write(tmp_path, "s.json", T122)
    coloring = write(tmp_path, "c.json", {"colors": {"a": 0, "b": 0, "c": 0}})
    code, out, _ = cli("find-copy", "--space", space, "--coloring", coloring, "--target", space, "--mode", "greedy")
    assert code == 0 and json.loads(out) == {"color": 0, "embedding": {"a": "a", "b": "b", "c": "c"}, "found": True, "scale": "1"}


def test_mono_subtree_cli_restricts_full_colorings(tmp_path):
    t = BranchingTree.complete(3, 2)
    tree = write(tmp_path, "t.json", {"nodes": [{"id": v, "parent": None if v == "r" else v.rsplit(".", 1)[0]} for v in t.nodes]})
    colors = {v: 7 for v in t.nodes}
    colors.update({v: i % 2 for i, v in enumerate(t.leaves)})
    coloring = write(tmp_path, "c.json", {"colors": colors})
    code, out, _ = cli("mono-subtree", "--tree", tree, "--coloring", coloring, "--branching", "2")
    doc = json.loads(out)
    assert code == 0 and doc["found"] and doc["color"] in (0, 1)
    cert = write(tmp_path, "m.json", doc)
    code, out, _ = cli("mono-subtree", "--tree", tree, "--coloring", coloring, "--branching", "3")
    assert code == 1
    ttree = write(tmp_path, "tt.json", {"nodes": [{"id": v, "parent": None if v == "r" else v.rsplit(".", 1)[0], "h": str(2 - t.depth(v))} for v in t.nodes]})
    code, out, _ = cli("export-dot", "--tree", ttree, "--coloring", coloring, "--certificate", cert)
    assert code == 0 and "penwidth=2" in out and pydot.graph_from_dot_data(out)


def test_universal_cli(tmp_path):
    target = write(tmp_path, "x.json", T122)
    code, out, _ = cli("universal", "--distances", "1,2", "--height", "3", "--colors", "2", "--multiplicity", "3", "--target", target, "--adversary", "exhaustive")
    assert code == 0 and json.loads(out)["cases"] == 512 == json.loads(out)["found"]
    code, out, _ = cli("universal", "--distances", "1,2", "--target", target, "--adversary", "random:3")
    doc = json.loads(out)
    assert code == 0 and set(doc["embedding"]) == {"a", "b", "c"} and pydot.graph_from_dot_data(doc["dot"])
    coloring = write(tmp_path, "c.json", {"colors": {}})
    assert cli("universal", "--distances", "1,2", "--target", target, "--coloring", coloring)[0] == 2
    assert cli("universal", "--distances", "1,2", "--target", target)[0] == 2
    assert cli("universal", "--distances", "1,x", "--target", target, "--adversary", "random:1")[0] == 2


def test_universal_cli_below_bound_reports(tmp_path):
    target = write(tmp_path, "x.json", T122)
    code, out, _ = cli("universal", "--distances", "1,2", "--height", "3", "--multiplicity", "2", "--target", target, "--adversary", "exhaustive")
    doc = json.loads(out)
    assert code == 1 and doc["cases"] == 16 and doc["found"] < 16


def test_generate_seed_and_env(tmp_path, monkeypatch):
    a = cli("generate", "--points", "6", "--seed", "4")[1]
    b = cli("generate", "--points", "6", "--seed", "4")[1]
    assert a == b
    monkeypatch.setenv("RAMSEY_SEED", "4")
    assert cli("generate", "--points", "6", "--seed", "99")[1] == a
    monkeypatch.setenv("RAMSEY_SEED", "nope")
    assert cli("generate", "--points", "6")[0] == 2


def test_console_entry_point_is_silent_on_success(tmp_path):
    space = write(tmp_path, "s.json", TWO)
    proc = subprocess.run([sys.executable, "-m", "ramseyspace.cli", "validate", "--space", space], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    proc = subprocess.run([sys.executable, "-m", "ramseyspace.cli", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
