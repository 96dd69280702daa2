import random

import pytest

from hymis.errors import InvalidArgumentError, ResourceLimitError
from hymis.exact import (
    BranchAndBound,
    brute_force_alpha,
    solve_exact,
    solve_exact_graph,
    verify_independent,
    violated_edges,
)
from hymis.expansion import clique_expand
from hymis.graph import Graph
from hymis.hypergraph import Hypergraph

from tests.generators import hypergraph, random_hypergraph


def test_verify_independent():
    assert not verify_independent(hypergraph([[1, 2, 3]]), {1, 3})
    assert verify_independent(hypergraph([[1, 2], [3, 4]]), {1, 3})
    assert verify_independent(hypergraph([[1, 2]]), set())


def test_violated_edges_names_the_edge():
    h = hypergraph([[1, 2], [2, 3, 4], [1, 4]])
    assert violated_edges(h, [1, 4]) == [3]
    assert violated_edges(h, [1, 3]) == []


def test_verify_rejects_unknown_vertex():
    with pytest.raises(InvalidArgumentError):
        verify_independent(hypergraph([[1, 2]]), {5})


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ([[1, 2], [2, 3]], 3, 2),
        ([[1, 2], [1, 3], [2, 3]], 3, 1),
        ([], 3, 3),
    ],
)
def test_solve_exact_examples(edges, n, expected):
    h = hypergraph(edges, n=n)
    solution = solve_exact(h)
    assert solution.cardinality == expected
    assert solution.optimal
    assert verify_independent(h, solution.members)


def test_solve_exact_path_picks_endpoints():
    assert solve_exact(hypergraph([[1, 2], [2, 3]])).members == (1, 3)


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ([(1, 2), (2, 3)], 3, 2),
        ([(1, 2), (1, 3), (2, 3)], 3, 1),
        ([], 4, 4),
    ],
)
def test_solve_exact_graph_examples(edges, n, expected):
    assert solve_exact_graph(Graph.from_edges(n, edges)).cardinality == expected


def test_solve_exact_skips_removed_vertices():
    h = hypergraph([[1, 2], [2, 3], [3, 4]])
    h.remove_vertex(3)
    solution = solve_exact(h)
    assert solution.cardinality == 2
    assert 3 not in solution.members


def test_size_bound_without_limit():
    h = Hypergraph(10)
    with pytest.raises(ResourceLimitError):
        solve_exact(h, max_vertices=5)
    assert solve_exact(h, limit=5.0, max_vertices=5).cardinality == 10


def test_time_limit_still_returns_independent_set():
    rng = random.Random(9)
    h = random_hypergraph(rng, min_vertices=70, max_vertices=70, max_edges=140, max_edge_size=3)
    solution = solve_exact(h, limit=0.0)
    assert verify_independent(h, solution.members)
    assert solution.cardinality >= 1


def test_branch_and_bound_on_masks():
    # 5-cycle
    masks = [0b00011, 0b00110, 0b01100, 0b11000, 0b10001]
    mask, optimal = BranchAndBound(5, masks).solve()
    assert optimal
    assert bin(mask).count("1") == 2


def test_brute_force_matches_hand_count():
    assert brute_force_alpha(hypergraph([[1, 2, 3], [3, 4]])) == 2
    assert brute_force_alpha(Hypergraph()) == 0


@pytest.mark.slow
def test_branch_and_bound_matches_enumeration():
    rng = random.Random(4)
    for _ in range(400):
        h = random_hypergraph(rng, max_vertices=12, max_edges=18)
        solution = solve_exact(h)
        assert verify_independent(h, solution.members)
        assert solution.cardinality == brute_force_alpha(h)


@pytest.mark.slow
def test_graph_solver_agrees_with_hypergraph_solver():
    rng = random.Random(5)
    for _ in range(200):
        h = random_hypergraph(rng, max_vertices=20, max_edges=30)
        g, id_map = clique_expand(h)
        hyper = solve_exact(h)
        graph = solve_exact_graph(g)
        assert hyper.cardinality == graph.cardinality
        assert verify_independent(h, id_map.original_vertices(graph.members))
