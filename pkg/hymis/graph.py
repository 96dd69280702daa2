from typing import Iterable, Iterator, List, Tuple

import networkx as nx

from hymis.errors import InvalidArgumentError


class Graph:
    """Simple undirected graph on vertices 1..n, stored in a ``networkx.Graph``."""

    def __init__(self, num_vertices: int = 0) -> None:
        if num_vertices < 0:
            raise InvalidArgumentError("vertex count must be non-negative")
        self._num_vertices = num_vertices
        self.nx_graph = nx.Graph()
        self.nx_graph.add_nodes_from(range(1, num_vertices + 1))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        g = cls(num_vertices)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def _require_vertex(self, v: int) -> None:
        if v < 1 or v > self._num_vertices:
            raise InvalidArgumentError(f"unknown vertex {v}")

    @property
    def num_vertices(self) -> int:
        return self._num_vertices

    @property
    def num_edges(self) -> int:
        return self.nx_graph.number_of_edges()

    def vertices(self) -> List[int]:
        return list(range(1, self._num_vertices + 1))

    def add_edge(self, u: int, v: int) -> bool:
        """Insert u-v; returns False when the edge already existed."""
        self._require_vertex(u)
        self._require_vertex(v)
        if u == v:
            raise InvalidArgumentError(f"self-loop on vertex {u}")
        if self.nx_graph.has_edge(u, v):
            return False
        self.nx_graph.add_edge(u, v)
        return True

    def has_edge(self, u: int, v: int) -> bool:
        self._require_vertex(u)
        self._require_vertex(v)
        return self.nx_graph.has_edge(u, v)

    def neighbors(self, v: int) -> List[int]:
        self._require_vertex(v)
        return sorted(self.nx_graph.neighbors(v))

    def degree(self, v: int) -> int:
        self._require_vertex(v)
        return self.nx_graph.degree(v)

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u, v in sorted((min(a, b), max(a, b)) for a, b in self.nx_graph.edges()):
            yield u, v

    def __repr__(self) -> str:
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"
