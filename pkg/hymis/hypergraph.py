from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, List, Set, Tuple

from hymis.errors import InvalidArgumentError, StructuralIntegrityError


@dataclass
class IdMap:
    """New (contiguous, 1-indexed) ids back to the ids of the source instance."""

    vertex_map: List[int] = field(default_factory=list)
    edge_map: List[int] = field(default_factory=list)

    def original_vertex(self, vertex: int) -> int:
        if vertex < 1 or vertex > len(self.vertex_map):
            raise InvalidArgumentError(f"vertex {vertex} outside of id map")
        return self.vertex_map[vertex - 1]

    def original_vertices(self, vertices: Iterable[int]) -> List[int]:
        return sorted(self.original_vertex(v) for v in vertices)


class Hypergraph:
    """Mutable hypergraph with incidence stored in both directions.

    Vertex and edge ids start at 1 and are never reused, so ids stay valid
    (and comparable with a reduction trace) while vertices and edges are
    removed. Removing a vertex deletes every edge it leaves empty.
    """

    def __init__(self, num_vertices: int = 0) -> None:
        self._next_vertex = 1
        self._next_edge = 1
        self._incidence: Dict[int, Set[int]] = {}
        self._pins: Dict[int, Set[int]] = {}
        for _ in range(num_vertices):
            self.add_vertex()

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        h = cls(num_vertices)
        for pins in edges:
            h.add_edge(pins)
        return h

    def add_vertex(self) -> int:
        vertex = self._next_vertex
        self._next_vertex += 1
        self._incidence[vertex] = set()
        return vertex

    def add_edge(self, pins: Iterable[int]) -> int:
        pin_set = set(pins)
        if not pin_set:
            raise InvalidArgumentError("hyperedges must contain at least one vertex")
        for v in pin_set:
            self._require_vertex(v)
        edge = self._next_edge
        self._next_edge += 1
        self._pins[edge] = pin_set
        for v in pin_set:
            self._incidence[v].add(edge)
        return edge

    def _require_vertex(self, v: int) -> None:
        if v not in self._incidence:
            raise InvalidArgumentError(f"unknown or removed vertex {v}")

    def _require_edge(self, e: int) -> None:
        if e not in self._pins:
            raise InvalidArgumentError(f"unknown or removed edge {e}")

    @property
    def num_vertices(self) -> int:
        return len(self._incidence)

    @property
    def num_edges(self) -> int:
        return len(self._pins)

    @property
    def total_pins(self) -> int:
        return sum(len(pins) for pins in self._pins.values())

    def vertices(self) -> List[int]:
        return sorted(self._incidence)

    def edges(self) -> List[int]:
        return sorted(self._pins)

    def has_vertex(self, v: int) -> bool:
        return v in self._incidence

    def has_edge(self, e: int) -> bool:
        return e in self._pins

    def pins(self, e: int) -> List[int]:
        self._require_edge(e)
        return sorted(self._pins[e])

    def pin_set(self, e: int) -> AbstractSet[int]:
        # live view, callers must not mutate it
        self._require_edge(e)
        return self._pins[e]

    def incidence(self, v: int) -> List[int]:
        self._require_vertex(v)
        return sorted(self._incidence[v])

    def edge_set(self, v: int) -> AbstractSet[int]:
        self._require_vertex(v)
        return self._incidence[v]

    def degree(self, v: int) -> int:
        self._require_vertex(v)
        return len(self._incidence[v])

    def edge_size(self, e: int) -> int:
        self._require_edge(e)
        return len(self._pins[e])

    def edge_lists(self) -> List[List[int]]:
        return [self.pins(e) for e in self.edges()]

    def neighbor_set(self, v: int) -> Set[int]:
        self._require_vertex(v)
        result: Set[int] = set()
        for e in self._incidence[v]:
            result.update(self._pins[e])
        result.discard(v)
        return result

    def neighbors(self, v: int) -> List[int]:
        return sorted(self.neighbor_set(v))

    def closed_neighborhood(self, v: int) -> List[int]:
        closed = self.neighbor_set(v)
        closed.add(v)
        return sorted(closed)

    def are_adjacent(self, u: int, v: int) -> bool:
        self._require_vertex(u)
        self._require_vertex(v)
        if u == v:
            raise InvalidArgumentError(f"adjacency test needs two distinct vertices, got {u} twice")
        small, large = (u, v) if len(self._incidence[u]) <= len(self._incidence[v]) else (v, u)
        return any(large in self._pins[e] for e in self._incidence[small])

    def remove_vertex(self, v: int) -> List[int]:
        """Remove ``v`` and return the ids of the edges that contained it.

        Edges that became empty are already gone when this returns.
        """
        self._require_vertex(v)
        affected = sorted(self._incidence.pop(v))
        for e in affected:
            pins = self._pins[e]
            pins.discard(v)
            if not pins:
                del self._pins[e]
        return affected

    def remove_edge(self, e: int) -> List[int]:
        """Remove ``e`` and return its former pins; vertices are kept."""
        self._require_edge(e)
        pins = sorted(self._pins.pop(e))
        for v in pins:
            self._incidence[v].discard(e)
        return pins

    def induced_subhypergraph(self, subset: Iterable[int]) -> Tuple["Hypergraph", IdMap]:
        kept = sorted(set(subset))
        for v in kept:
            self._require_vertex(v)
        new_id = {v: i for i, v in enumerate(kept, start=1)}
        sub = Hypergraph(len(kept))
        id_map = IdMap(vertex_map=list(kept))
        for e in self.edges():
            trace = [new_id[v] for v in self._pins[e] if v in new_id]
            if trace:
                sub.add_edge(trace)
                id_map.edge_map.append(e)
        return sub, id_map

    def compact(self) -> Tuple["Hypergraph", IdMap]:
        return self.induced_subhypergraph(self._incidence)

    def copy(self) -> "Hypergraph":
        clone = Hypergraph()
        clone._next_vertex = self._next_vertex
        clone._next_edge = self._next_edge
        clone._incidence = {v: set(edges) for v, edges in self._incidence.items()}
        clone._pins = {e: set(pins) for e, pins in self._pins.items()}
        return clone

    def is_compact(self) -> bool:
        n, m = self.num_vertices, self.num_edges
        return (
            all(1 <= v <= n for v in self._incidence)
            and all(1 <= e <= m for e in self._pins)
        )

    def audit(self) -> None:
        for e, pins in self._pins.items():
            if not pins:
                raise StructuralIntegrityError(f"edge {e} is empty")
            for v in pins:
                if v not in self._incidence:
                    raise StructuralIntegrityError(f"edge {e} references removed vertex {v}")
                if e not in self._incidence[v]:
                    raise StructuralIntegrityError(f"vertex {v} misses incidence to edge {e}")
        for v, edges in self._incidence.items():
            if v < 1 or v >= self._next_vertex:
                raise StructuralIntegrityError(f"vertex id {v} was never allocated")
            for e in edges:
                if e not in self._pins or v not in self._pins[e]:
                    raise StructuralIntegrityError(f"vertex {v} lists edge {e} that does not contain it")
        for e in self._pins:
            if e < 1 or e >= self._next_edge:
                raise StructuralIntegrityError(f"edge id {e} was never allocated")

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.num_vertices}, m={self.num_edges})"
