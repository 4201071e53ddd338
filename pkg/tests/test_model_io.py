import json

import pytest

from fdsolve import (ColoringSpec, ModelError, UGraph, WalkSpec, dds_count,
                     dfs_count, parse_model, serialize_model)
from fdsolve.model_io import coloring_document, saw_document

CANONICAL = """
{
  "variables": [
    {"name": "A", "domain": [3, 5]},
    {"name": "B", "domain": [3, 4]},
    {"name": "C", "domain": {"range": [1, 2]}},
    {"name": "D", "domain": {"range": [1, 2]}}
  ],
  "constraints": [
    {"type": "neq", "vars": ["A", "B"]},
    {"type": "alldifferent", "vars": ["A", "B", "C", "D"]},
    {"type": "linear", "coeffs": [1, 1], "vars": ["C", "D"], "rel": "leq",
     "rhs": 10},
    {"type": "table", "vars": ["C", "D"], "tuples": [[1, 2], [2, 1]]},
    {"type": "regular", "vars": ["C", "D"],
     "dfa": {"states": 2, "start": 0, "finals": [0, 1],
             "transitions": [[0, 1, 1], [0, 2, 1], [1, 1, 0], [1, 2, 0]]}},
    {"type": "slide", "vars": ["A", "B", "C"], "width": 2,
     "tuples": [[3, 4], [5, 3], [5, 4], [4, 1], [3, 1], [3, 2], [4, 2]]}
  ]
}
"""


def intro_document_text():
    names = ["A", "B", "C", "D"]
    variables = [{"name": "A", "domain": [3, 5]},
                 {"name": "B", "domain": [3, 4]},
                 {"name": "C", "domain": [1, 2]},
                 {"name": "D", "domain": [1, 2]}]
    constraints = [{"type": "neq", "vars": [a, b]}
                   for i, a in enumerate(names)
                   for b in names[i + 1:]]
    return json.dumps({"variables": variables, "constraints": constraints})


def test_parse_canonical_document():
    doc = parse_model(CANONICAL)
    assert doc.names == ["A", "B", "C", "D"]
    assert doc.variables[2].values == (1, 2)  # range normalized
    assert len(doc.constraints) == 6
    state = doc.build_state()
    assert state.num_vars == 4
    assert len(state.propagators) == 6


def test_roundtrip():
    for text in (CANONICAL, intro_document_text()):
        doc = parse_model(text)
        assert parse_model(serialize_model(doc)) == doc


def test_generated_documents_roundtrip_and_solve():
    coloring = coloring_document(ColoringSpec(erdos_graph(), 3))
    assert parse_model(serialize_model(coloring)) == coloring
    walk = saw_document(WalkSpec(3))
    assert parse_model(serialize_model(walk)) == walk
    assert dds_count(walk.build_state()).count == 12


def erdos_graph():
    from fdsolve import erdos_renyi
    return erdos_renyi(6, 0.4, 7)


def test_intro_document_counts_six():
    doc = parse_model(intro_document_text())
    state = doc.build_state()
    assert dfs_count(state).count == 6
    assert dds_count(state).count == 6


def test_empty_constraints_count_product_of_domains():
    doc = parse_model(json.dumps({
        "variables": [{"name": "x", "domain": [0, 1, 2]},
                      {"name": "y", "domain": [0, 1]}],
        "constraints": []}))
    assert dfs_count(doc.build_state()).count == 6


def test_parse_errors():
    with pytest.raises(ModelError, match="syntax error"):
        parse_model("{not json")
    with pytest.raises(ModelError, match="unknown variable"):
        parse_model(json.dumps({
            "variables": [{"name": "x", "domain": [0]}],
            "constraints": [{"type": "neq", "vars": ["x", "zz"]}]}))
    with pytest.raises(ModelError, match="arity"):
        parse_model(json.dumps({
            "variables": [{"name": "x", "domain": [0]},
                          {"name": "y", "domain": [0]}],
            "constraints": [{"type": "table", "vars": ["x", "y"],
                             "tuples": [[1, 2, 3]]}]}))
    with pytest.raises(ModelError, match="automaton"):
        parse_model(json.dumps({
            "variables": [{"name": "x", "domain": [0]}],
            "constraints": [{"type": "regular", "vars": ["x"],
                             "dfa": {"states": 1, "start": 5, "finals": [],
                                     "transitions": []}}]}))
    with pytest.raises(ModelError, match="duplicate variable"):
        parse_model(json.dumps({
            "variables": [{"name": "x", "domain": [0]},
                          {"name": "x", "domain": [1]}],
            "constraints": []}))
    with pytest.raises(ModelError, match="unknown constraint type"):
        parse_model(json.dumps({
            "variables": [{"name": "x", "domain": [0]}],
            "constraints": [{"type": "wat", "vars": ["x"]}]}))
