import logging
import time
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from hymis.config import settings
from hymis.errors import InvalidArgumentError, ResourceLimitError
from hymis.graph import Graph
from hymis.hypergraph import Hypergraph
from hymis.logging_utils import log_structured, seconds_since
from hymis.models import Solution


def verify_independent(h: Hypergraph, members: Iterable[int]) -> bool:
    """True iff every live edge holds at most one vertex of ``members``."""
    seen = set()
    for v in set(members):
        if not h.has_vertex(v):
            raise InvalidArgumentError(f"unknown or removed vertex {v}")
        for e in h.edge_set(v):
            if e in seen:
                return False
            seen.add(e)
    return True


def violated_edges(h: Hypergraph, members: Iterable[int]) -> List[int]:
    chosen = set(members)
    for v in chosen:
        if not h.has_vertex(v):
            raise InvalidArgumentError(f"unknown or removed vertex {v}")
    return [e for e in h.edges() if len(h.pin_set(e) & chosen) > 1]


def _hypergraph_masks(h: Hypergraph) -> Tuple[List[int], List[int]]:
    labels = h.vertices()
    index = {v: i for i, v in enumerate(labels)}
    masks = []
    for e in h.edges():
        mask = 0
        for v in h.pin_set(e):
            mask |= 1 << index[v]
        masks.append(mask)
    return labels, masks


def _graph_masks(g: Graph) -> Tuple[List[int], List[int]]:
    labels = g.vertices()
    masks = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in g.edges()]
    return labels, masks


def _neighbor_masks(size: int, edge_masks: Sequence[int]) -> List[int]:
    neighbors = [0] * size
    for mask in edge_masks:
        rest = mask
        while rest:
            low = rest & -rest
            neighbors[low.bit_length() - 1] |= mask
            rest ^= low
    return [nb & ~(1 << i) for i, nb in enumerate(neighbors)]


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Timeout(Exception):
    pass


class BranchAndBound:
    """Maximum independent set search on a (hyper)graph given as bit masks.

    Branches on a vertex of maximum residual degree (lowest index on ties),
    first including it, then excluding it. The upper bound is a greedy edge
    cover of the residual vertices: each cover edge holds at most one
    solution vertex and every uncovered vertex counts once.
    """

    def __init__(self, size: int, edge_masks: Sequence[int], time_limit: Optional[float] = None) -> None:
        self.size = size
        self.edges = [m for m in edge_masks if m & (m - 1)]
        self.neighbors = _neighbor_masks(size, self.edges)
        self.incident: List[List[int]] = [[] for _ in range(size)]
        for mask in self.edges:
            for i in _bits(mask):
                self.incident[i].append(mask)
        self.time_limit = time_limit
        self.nodes = 0
        self.best_mask = 0
        self.best_size = 0

    def _upper_bound(self, candidates: int) -> int:
        uncovered = candidates
        bound = 0
        while uncovered:
            gain, pick = 1, 0
            for mask in self.edges:
                covered = bin(mask & uncovered).count("1")
                if covered > gain:
                    gain, pick = covered, mask
            if not pick:
                break
            uncovered &= ~pick
            bound += 1
        return bound + bin(uncovered).count("1")

    def _branch_vertex(self, candidates: int) -> int:
        best, best_degree = -1, -1
        for i in _bits(candidates):
            degree = sum(1 for mask in self.incident[i] if (mask & candidates) & ((mask & candidates) - 1))
            if degree > best_degree:
                best, best_degree = i, degree
        return best

    def _absorb_free(self, candidates: int, chosen: int, count: int) -> Tuple[int, int, int]:
        for i in _bits(candidates):
            if not self.neighbors[i] & candidates:
                bit = 1 << i
                candidates &= ~bit
                chosen |= bit
                count += 1
        return candidates, chosen, count

    def _greedy(self) -> None:
        candidates = (1 << self.size) - 1
        chosen, count = 0, 0
        while candidates:
            pick = min(_bits(candidates), key=lambda i: bin(self.neighbors[i] & candidates).count("1"))
            chosen |= 1 << pick
            count += 1
            candidates &= ~(self.neighbors[pick] | (1 << pick))
        self.best_mask, self.best_size = chosen, count

    def solve(self) -> Tuple[int, bool]:
        """Return (mask of the best solution, proven optimal)."""
        deadline = None if self.time_limit is None else time.perf_counter() + self.time_limit
        self._greedy()
        stack = [((1 << self.size) - 1, 0, 0)]
        try:
            while stack:
                candidates, chosen, count = stack.pop()
                self.nodes += 1
                if deadline is not None and self.nodes % 256 == 0 and time.perf_counter() >= deadline:
                    raise _Timeout()
                candidates, chosen, count = self._absorb_free(candidates, chosen, count)
                if not candidates:
                    if count > self.best_size:
                        self.best_mask, self.best_size = chosen, count
                    continue
                if count + self._upper_bound(candidates) <= self.best_size:
                    continue
                v = self._branch_vertex(candidates)
                bit = 1 << v
                stack.append((candidates & ~bit, chosen, count))
                stack.append((candidates & ~(self.neighbors[v] | bit), chosen | bit, count + 1))
        except _Timeout:
            return self.best_mask, False
        return self.best_mask, True


def _solve(
    labels: List[int],
    edge_masks: List[int],
    limit: Optional[float],
    max_vertices: Optional[int],
) -> Solution:
    bound = settings.exact_max_vertices if max_vertices is None else max_vertices
    if limit is None and len(labels) > bound:
        raise ResourceLimitError(
            f"{len(labels)} vertices exceed the exact-solver bound of {bound}; set a time limit"
        )
    started = time.perf_counter()
    search = BranchAndBound(len(labels), edge_masks, time_limit=limit)
    mask, optimal = search.solve()
    solution = Solution.of((labels[i] for i in _bits(mask)), optimal=optimal)
    log_structured(
        logging.INFO,
        "solve_finished",
        n=len(labels),
        cardinality=solution.cardinality,
        optimal=optimal,
        nodes=search.nodes,
        t=seconds_since(started),
    )
    return solution


def solve_exact(
    h: Hypergraph,
    limit: Optional[float] = None,
    max_vertices: Optional[int] = None,
) -> Solution:
    labels, masks = _hypergraph_masks(h)
    return _solve(labels, masks, limit, max_vertices)


def solve_exact_graph(
    g: Graph,
    limit: Optional[float] = None,
    max_vertices: Optional[int] = None,
) -> Solution:
    labels, masks = _graph_masks(g)
    return _solve(labels, masks, limit, max_vertices)


def _enumerate_alpha(size: int, edge_masks: Sequence[int]) -> int:
    neighbors = _neighbor_masks(size, [m for m in edge_masks if m & (m - 1)])

    @lru_cache(maxsize=None)
    def alpha(candidates: int) -> int:
        if not candidates:
            return 0
        low = candidates & -candidates
        v = low.bit_length() - 1
        rest = candidates ^ low
        return max(alpha(rest), 1 + alpha(rest & ~neighbors[v]))

    return alpha((1 << size) - 1)


def brute_force_alpha(h: Hypergraph) -> int:
    """α(h) by exhaustive include/exclude enumeration, no pruning."""
    labels, masks = _hypergraph_masks(h)
    return _enumerate_alpha(len(labels), masks)


def brute_force_alpha_graph(g: Graph) -> int:
    labels, masks = _graph_masks(g)
    return _enumerate_alpha(len(labels), masks)
