import logging
import time
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Deque, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from hymis.errors import InvalidSolutionError
from hymis.exact import verify_independent
from hymis.hypergraph import Hypergraph
from hymis.logging_utils import log_structured
from hymis.models import (
    KernelResult,
    ReducerConfig,
    ReductionKind,
    RuleStats,
    Solution,
    TraceEvent,
)


# Largest number of internal edges the simplicial check inspects.
SIMPLICIAL_MAX_CLIQUE_EDGES = 3


@dataclass(frozen=True)
class Action:
    kind: ReductionKind
    include: Tuple[int, ...] = ()
    exclude: Tuple[int, ...] = ()
    remove_edges: Tuple[int, ...] = ()


@dataclass
class ChangeSet:
    removed_vertices: Set[int] = field(default_factory=set)
    removed_edges: Set[int] = field(default_factory=set)
    shrunk_edges: Set[int] = field(default_factory=set)
    touched_vertices: Set[int] = field(default_factory=set)


def find_size_one_edge(h: Hypergraph, e: int) -> Optional[Action]:
    if h.edge_size(e) != 1:
        return None
    return Action(ReductionKind.SIZE_ONE_EDGE, remove_edges=(e,))


def find_edge_domination(h: Hypergraph, e: int) -> Optional[Action]:
    pins = h.pin_set(e)
    # a dominating edge contains every pin, so scanning one pin's edges suffices
    pivot = min(pins, key=lambda v: (h.degree(v), v))
    for other in sorted(h.edge_set(pivot)):
        if other == e:
            continue
        other_pins = h.pin_set(other)
        if len(other_pins) >= len(pins) and pins <= other_pins:
            return Action(ReductionKind.EDGE_DOMINATION, remove_edges=(e,))
    return None


def find_degree_zero(h: Hypergraph, v: int) -> Optional[Action]:
    # singleton edges {v} do not create neighbours
    if any(len(h.pin_set(e)) > 1 for e in h.edge_set(v)):
        return None
    return Action(ReductionKind.DEGREE_ZERO, include=(v,))


def find_degree_one(h: Hypergraph, v: int) -> Optional[Action]:
    if h.degree(v) != 1:
        return None
    return Action(ReductionKind.DEGREE_ONE, include=(v,))


def find_twins(h: Hypergraph, v: int) -> Optional[Action]:
    neighborhood = h.neighbor_set(v)
    if not neighborhood:
        return None
    # every twin of v is a neighbour of each vertex in N(v)
    anchor = min(neighborhood, key=lambda w: (h.degree(w), w))
    candidates = h.neighbor_set(anchor) - neighborhood
    candidates.discard(v)
    twins = [v]
    for u in sorted(candidates):
        if h.neighbor_set(u) == neighborhood:
            twins.append(u)
    if len(twins) < 2:
        return None
    min_degree = min(h.degree(t) for t in twins)
    if len(twins) < min_degree:
        return None
    return Action(ReductionKind.TWINS, include=tuple(sorted(twins)))


def find_sunflower(h: Hypergraph, v: int) -> Optional[Action]:
    edges = h.edge_set(v)
    if not edges:
        return None
    smallest = min(edges, key=lambda e: (len(h.pin_set(e)), e))
    core = [u for u in sorted(h.pin_set(smallest)) if h.edge_set(u) == edges]
    if len(core) < 2:
        return None
    return Action(ReductionKind.SUNFLOWER, exclude=tuple(core[1:]))


def _internal_edges(h: Hypergraph, clique: Set[int], limit: int) -> Optional[List[int]]:
    """Edges fully inside ``clique``; None once more than ``limit`` are found."""
    found: Set[int] = set()
    for u in clique:
        for e in h.edge_set(u):
            if e in found or not h.pin_set(e) <= clique:
                continue
            found.add(e)
            if len(found) > limit:
                return None
    return sorted(found)


def find_simplicial(h: Hypergraph, v: int) -> Optional[Action]:
    if h.degree(v) == 0:
        return None
    clique = h.neighbor_set(v)
    if not clique:
        return None

    pivot = min(clique, key=lambda u: (h.degree(u), u))
    if any(h.pin_set(e) == clique for e in h.edge_set(pivot)):
        return Action(ReductionKind.SIMPLICIAL_VERTEX, include=(v,))

    internal = _internal_edges(h, clique, SIMPLICIAL_MAX_CLIQUE_EDGES)
    if internal is None:
        return None
    pin_sets = [h.pin_set(e) for e in internal]
    for a, b in combinations(sorted(clique), 2):
        if not any(a in pins and b in pins for pins in pin_sets):
            return None
    return Action(ReductionKind.SIMPLICIAL_VERTEX, include=(v,))


def find_vertex_domination(h: Hypergraph, u: int) -> Optional[Action]:
    closed = h.neighbor_set(u)
    closed.add(u)
    for v in sorted(closed):
        if v == u:
            continue
        # N[v] ⊆ N[u] iff every edge of v lies inside N[u]
        if all(h.pin_set(e) <= closed for e in h.edge_set(v)):
            return Action(ReductionKind.VERTEX_DOMINATION, exclude=(u,))
    return None


def find_unconfined(h: Hypergraph, v: int) -> Optional[Action]:
    members = {v}
    frontier = h.neighbor_set(v)
    closed = frontier | members
    cache: Dict[int, Set[int]] = {}

    def neighbors_of(x: int) -> Set[int]:
        if x not in cache:
            cache[x] = h.neighbor_set(x)
        return cache[x]

    while True:
        grow: Optional[int] = None
        for u in sorted(frontier):
            nu = neighbors_of(u)
            if len(nu & members) != 1:
                continue
            outside = nu - closed
            if not outside:
                return Action(ReductionKind.UNCONFINED, exclude=(v,))
            if len(outside) == 1 and grow is None:
                grow = next(iter(outside))
        if grow is None:
            return None
        members.add(grow)
        added = neighbors_of(grow)
        frontier |= added
        frontier -= members
        closed |= added
        closed.add(grow)


def execute(h: Hypergraph, action: Action) -> Tuple[TraceEvent, ChangeSet]:
    changes = ChangeSet()
    doomed: Set[int] = set(action.exclude)
    for v in action.include:
        doomed.update(h.neighbor_set(v))
        doomed.add(v)

    for e in action.remove_edges:
        changes.touched_vertices.update(h.remove_edge(e))
        changes.removed_edges.add(e)

    for v in sorted(doomed):
        for e in h.remove_vertex(v):
            if h.has_edge(e):
                changes.shrunk_edges.add(e)
            else:
                changes.removed_edges.add(e)
        changes.removed_vertices.add(v)

    changes.shrunk_edges -= changes.removed_edges
    for e in changes.shrunk_edges:
        changes.touched_vertices.update(h.pin_set(e))
    changes.touched_vertices -= changes.removed_vertices

    event = TraceEvent(
        kind=action.kind,
        included=tuple(sorted(action.include)),
        excluded=tuple(sorted(action.exclude)),
        removed_edges=tuple(sorted(changes.removed_edges)),
    )
    return event, changes


Finder = Callable[[Hypergraph, int], Optional[Action]]

FINDERS: Dict[ReductionKind, Finder] = {
    ReductionKind.SIZE_ONE_EDGE: find_size_one_edge,
    ReductionKind.EDGE_DOMINATION: find_edge_domination,
    ReductionKind.DEGREE_ZERO: find_degree_zero,
    ReductionKind.DEGREE_ONE: find_degree_one,
    ReductionKind.TWINS: find_twins,
    ReductionKind.SUNFLOWER: find_sunflower,
    ReductionKind.SIMPLICIAL_VERTEX: find_simplicial,
    ReductionKind.VERTEX_DOMINATION: find_vertex_domination,
    ReductionKind.UNCONFINED: find_unconfined,
}

EDGE_RULES = frozenset({ReductionKind.SIZE_ONE_EDGE, ReductionKind.EDGE_DOMINATION})


def _apply(kind: ReductionKind, h: Hypergraph, locus: int) -> Optional[TraceEvent]:
    action = FINDERS[kind](h, locus)
    if action is None:
        return None
    event, _ = execute(h, action)
    return event


def apply_size_one_edge(h: Hypergraph, e: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.SIZE_ONE_EDGE, h, e)


def apply_edge_domination(h: Hypergraph, e: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.EDGE_DOMINATION, h, e)


def apply_degree_zero(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.DEGREE_ZERO, h, v)


def apply_degree_one(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.DEGREE_ONE, h, v)


def apply_twins(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.TWINS, h, v)


def apply_sunflower(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.SUNFLOWER, h, v)


def apply_simplicial(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.SIMPLICIAL_VERTEX, h, v)


def apply_vertex_domination(h: Hypergraph, u: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.VERTEX_DOMINATION, h, u)


def apply_unconfined(h: Hypergraph, v: int) -> Optional[TraceEvent]:
    return _apply(ReductionKind.UNCONFINED, h, v)


class _LocusQueue:
    """FIFO of vertex or edge ids without duplicates."""

    def __init__(self) -> None:
        self._queue: Deque[int] = deque()
        self._members: Set[int] = set()

    def extend(self, loci: Iterable[int]) -> None:
        for locus in loci:
            if locus not in self._members:
                self._members.add(locus)
                self._queue.append(locus)

    def pop(self) -> int:
        locus = self._queue.popleft()
        self._members.discard(locus)
        return locus

    def __bool__(self) -> bool:
        return bool(self._queue)


@dataclass
class _Tier:
    kind: ReductionKind
    finder: Finder
    on_edges: bool
    queue: _LocusQueue = field(default_factory=_LocusQueue)


class Reducer:
    def __init__(self, config: Optional[ReducerConfig] = None) -> None:
        self.config = config or ReducerConfig()

    def _tiers(self) -> List[_Tier]:
        kinds = (ReductionKind.SIZE_ONE_EDGE,) + self.config.active_rules()
        return [_Tier(kind, FINDERS[kind], kind in EDGE_RULES) for kind in kinds]

    @staticmethod
    def _seed(h: Hypergraph, tiers: Sequence[_Tier]) -> None:
        vertices, edges = h.vertices(), h.edges()
        for tier in tiers:
            tier.queue.extend(edges if tier.on_edges else vertices)

    @staticmethod
    def _mark_dirty(h: Hypergraph, tiers: Sequence[_Tier], changes: ChangeSet) -> None:
        dirty = set(changes.touched_vertices)
        for v in changes.touched_vertices:
            dirty.update(h.neighbor_set(v))
        vertices = sorted(dirty)
        edges = sorted(changes.shrunk_edges)
        for tier in tiers:
            tier.queue.extend(edges if tier.on_edges else vertices)

    def run(self, h: Hypergraph) -> KernelResult:
        h.audit()
        work = h.copy()
        tiers = self._tiers()
        trace: List[TraceEvent] = []
        stats = {tier.kind: RuleStats() for tier in tiers}
        started = time.perf_counter()
        deadline = None if self.config.time_limit is None else started + self.config.time_limit
        timed_out = False

        # Queues only follow local changes, so whenever a phase changed the
        # hypergraph every locus is checked once more before stopping.
        changed = True
        while changed and not timed_out:
            changed = False
            self._seed(work, tiers)
            while True:
                if deadline is not None and time.perf_counter() >= deadline:
                    timed_out = True
                    break
                tier = next((t for t in tiers if t.queue), None)
                if tier is None:
                    break
                locus = tier.queue.pop()
                alive = work.has_edge(locus) if tier.on_edges else work.has_vertex(locus)
                if not alive:
                    continue
                action = tier.finder(work, locus)
                if action is None:
                    continue
                event, changes = execute(work, action)
                trace.append(event)
                rule_stats = stats[tier.kind]
                rule_stats.applications += 1
                rule_stats.vertices_removed += len(changes.removed_vertices)
                rule_stats.edges_removed += len(changes.removed_edges)
                log_structured(logging.DEBUG, "rule_applied", **event.to_dict())
                self._mark_dirty(work, tiers, changes)
                changed = True

        kernel, id_map = work.compact()
        result = KernelResult(
            kernel=kernel,
            id_map=id_map,
            trace=trace,
            stats=stats,
            elapsed=time.perf_counter() - started,
            timed_out=timed_out,
        )
        log_structured(
            logging.INFO,
            "reduce_finished",
            n=h.num_vertices,
            m=h.num_edges,
            n_r=kernel.num_vertices,
            m_r=kernel.num_edges,
            offset=result.offset,
            t=round(result.elapsed, 6),
            timed_out=timed_out,
        )
        return result


def reduce(h: Hypergraph, config: Optional[ReducerConfig] = None) -> KernelResult:
    """Reduce ``h`` exhaustively; ``h`` itself is left untouched."""
    return Reducer(config).run(h)


def lift_solution(
    trace: Sequence[TraceEvent],
    kernel_solution: Iterable[int],
    original: Optional[Hypergraph] = None,
) -> Solution:
    """Extend a kernel solution, given in original ids, by every included vertex.

    Rules only include or exclude vertices, so the replay order of the trace
    does not matter.
    """
    chosen = set(kernel_solution)
    included: Set[int] = set()
    excluded: Set[int] = set()
    for event in trace:
        included.update(event.included)
        excluded.update(event.excluded)
    clash = sorted(chosen & (included | excluded))
    if clash:
        raise InvalidSolutionError(f"vertices {clash} were already decided by the reduction")
    lifted = chosen | included
    if original is not None and not verify_independent(original, lifted):
        raise InvalidSolutionError("lifted solution is not independent in the original hypergraph")
    return Solution.of(lifted)


def lift_kernel_solution(
    result: KernelResult,
    kernel_solution: Iterable[int],
    original: Optional[Hypergraph] = None,
) -> Solution:
    """Lift a solution expressed in kernel (compacted) ids."""
    members = set(kernel_solution)
    if not verify_independent(result.kernel, members):
        raise InvalidSolutionError("kernel solution is not independent in the kernel")
    return lift_solution(result.trace, result.id_map.original_vertices(members), original)
