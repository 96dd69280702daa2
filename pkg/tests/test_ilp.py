import random

import pytest

from hymis.errors import ParseError, ResourceLimitError
from hymis.exact import brute_force_alpha, brute_force_alpha_graph
from hymis.expansion import clique_expand
from hymis.graph import Graph
from hymis.hypergraph import Hypergraph
from hymis.ilp import LpModel, enumerate_optimum, export_lp_graph, export_lp_hypergraph, parse_lp

from tests.generators import hypergraph, random_hypergraph


def test_single_edge_document():
    text = export_lp_hypergraph(hypergraph([[1, 2]]))
    assert text == "Maximize\n x1 + x2\nSubject To\n c1: x1 + x2 <= 1\nBinary\n x1 x2\nEnd\n"


def test_edgeless_document_has_no_rows():
    model = parse_lp(export_lp_hypergraph(Hypergraph(1)))
    assert model.objective == ["x1"]
    assert model.constraints == []
    assert enumerate_optimum(model) == 1


def test_hypergraph_model_optimum():
    h = hypergraph([[1, 2, 3], [3, 4]])
    model = parse_lp(export_lp_hypergraph(h))
    assert [row.variables for row in model.constraints] == [["x1", "x2", "x3"], ["x3", "x4"]]
    assert enumerate_optimum(model) == 2 == brute_force_alpha(h)


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ([(1, 2), (1, 3), (2, 3)], 3, 1),
        ([(1, 2)], 2, 1),
        ([], 3, 3),
    ],
)
def test_graph_model_optimum(edges, n, expected):
    model = parse_lp(export_lp_graph(Graph.from_edges(n, edges)))
    assert len(model.constraints) == len(edges)
    assert enumerate_optimum(model) == expected


def test_long_rows_are_wrapped():
    h = hypergraph([list(range(1, 31))])
    text = export_lp_hypergraph(h)
    assert all(len(line) < 120 for line in text.splitlines())
    model = parse_lp(text)
    assert len(model.objective) == 30
    assert model.constraints[0].variables == [f"x{v}" for v in range(1, 31)]
    assert model.binaries == model.objective


def test_empty_hypergraph_objective():
    text = export_lp_hypergraph(Hypergraph())
    assert "Maximize\n 0\n" in text
    assert parse_lp(text).objective == []


def test_parse_lp_rejects_content_before_objective():
    with pytest.raises(ParseError):
        parse_lp("x1 + x2\nMaximize\n x1\nEnd\n")


def test_enumeration_refuses_large_models():
    model = LpModel(objective=[f"x{i}" for i in range(1, 40)])
    with pytest.raises(ResourceLimitError):
        enumerate_optimum(model)


def test_export_is_deterministic():
    h = hypergraph([[3, 1], [2, 4, 1]])
    assert export_lp_hypergraph(h) == export_lp_hypergraph(h.copy())


@pytest.mark.slow
def test_models_attain_alpha():
    rng = random.Random(6)
    for _ in range(200):
        h = random_hypergraph(rng, max_vertices=12, max_edges=16)
        g, _ = clique_expand(h)
        alpha = brute_force_alpha(h)
        assert enumerate_optimum(parse_lp(export_lp_hypergraph(h))) == alpha
        assert enumerate_optimum(parse_lp(export_lp_graph(g))) == alpha
        assert brute_force_alpha_graph(g) == alpha
