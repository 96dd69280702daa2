from itertools import combinations
from typing import Tuple

from hymis.graph import Graph
from hymis.hypergraph import Hypergraph, IdMap


def clique_expand(h: Hypergraph) -> Tuple[Graph, IdMap]:
    """Replace every hyperedge by a clique on its pins.

    Graph vertices are the live hypergraph vertices renumbered 1..n in
    ascending id order; the returned map gives the hypergraph id of each.
    Strong independence in ``h`` equals plain independence in the result.
    """
    labels = h.vertices()
    index = {v: i for i, v in enumerate(labels, start=1)}
    g = Graph(len(labels))
    for e in h.edges():
        for u, v in combinations(h.pins(e), 2):
            g.add_edge(index[u], index[v])
    return g, IdMap(vertex_map=labels)
