from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from hymis.errors import InvalidArgumentError
from hymis.hypergraph import Hypergraph, IdMap


class ReductionKind(str, Enum):
    SIZE_ONE_EDGE = "SizeOneEdge"
    EDGE_DOMINATION = "EdgeDomination"
    DEGREE_ZERO = "DegreeZero"
    DEGREE_ONE = "DegreeOne"
    TWINS = "Twins"
    SUNFLOWER = "Sunflower"
    SIMPLICIAL_VERTEX = "SimplicialVertex"
    VERTEX_DOMINATION = "VertexDomination"
    UNCONFINED = "Unconfined"

    @classmethod
    def parse(cls, name: str) -> "ReductionKind":
        for kind in cls:
            if kind.value == name.strip():
                return kind
        raise InvalidArgumentError(f"unknown reduction rule {name!r}")


# SizeOneEdge is applied eagerly and is not part of the configurable order.
CANONICAL_ORDER: Tuple[ReductionKind, ...] = (
    ReductionKind.DEGREE_ZERO,
    ReductionKind.DEGREE_ONE,
    ReductionKind.TWINS,
    ReductionKind.SUNFLOWER,
    ReductionKind.SIMPLICIAL_VERTEX,
    ReductionKind.VERTEX_DOMINATION,
    ReductionKind.UNCONFINED,
    ReductionKind.EDGE_DOMINATION,
)


def _id_field(data: Dict[str, Any], key: str) -> Tuple[int, ...]:
    values = data.get(key, [])
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise InvalidArgumentError(f"{key} must be a list of integer ids")
    return tuple(sorted(values))


@dataclass(frozen=True)
class TraceEvent:
    kind: ReductionKind
    included: Tuple[int, ...] = ()
    excluded: Tuple[int, ...] = ()
    removed_edges: Tuple[int, ...] = ()

    @property
    def alpha_offset(self) -> int:
        return len(self.included)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "included": list(self.included),
            "excluded": list(self.excluded),
            "removed_edges": list(self.removed_edges),
            "alpha_offset": self.alpha_offset,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceEvent":
        event = cls(
            kind=ReductionKind.parse(str(data["kind"])),
            included=_id_field(data, "included"),
            excluded=_id_field(data, "excluded"),
            removed_edges=_id_field(data, "removed_edges"),
        )
        if set(event.included) & set(event.excluded):
            raise InvalidArgumentError("a vertex cannot be both included and excluded")
        offset = data.get("alpha_offset", event.alpha_offset)
        if offset != event.alpha_offset:
            raise InvalidArgumentError(
                f"alpha_offset {offset} does not match {len(event.included)} included vertices"
            )
        return event


@dataclass
class RuleStats:
    applications: int = 0
    vertices_removed: int = 0
    edges_removed: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {
            "applications": self.applications,
            "vertices_removed": self.vertices_removed,
            "edges_removed": self.edges_removed,
        }


@dataclass
class ReducerConfig:
    enabled_rules: Sequence[ReductionKind] = CANONICAL_ORDER
    time_limit: Optional[float] = None
    unconfined_enabled: bool = True

    def __post_init__(self) -> None:
        rules = list(self.enabled_rules)
        if len(set(rules)) != len(rules):
            raise InvalidArgumentError("reduction rules listed more than once")
        for kind in rules:
            if kind not in CANONICAL_ORDER:
                raise InvalidArgumentError(f"{kind.value} cannot be configured, it is always applied")
        self.enabled_rules = tuple(kind for kind in CANONICAL_ORDER if kind in rules)
        if self.time_limit is not None and self.time_limit < 0:
            raise InvalidArgumentError("time limit must be non-negative")

    @classmethod
    def from_names(
        cls,
        names: Optional[Iterable[str]] = None,
        time_limit: Optional[float] = None,
        unconfined_enabled: bool = True,
    ) -> "ReducerConfig":
        rules = CANONICAL_ORDER if names is None else [ReductionKind.parse(n) for n in names if n.strip()]
        return cls(enabled_rules=rules, time_limit=time_limit, unconfined_enabled=unconfined_enabled)

    def active_rules(self) -> Tuple[ReductionKind, ...]:
        if self.unconfined_enabled:
            return tuple(self.enabled_rules)
        return tuple(kind for kind in self.enabled_rules if kind is not ReductionKind.UNCONFINED)


@dataclass
class KernelResult:
    kernel: Hypergraph
    id_map: IdMap
    trace: List[TraceEvent] = field(default_factory=list)
    stats: Dict[ReductionKind, RuleStats] = field(default_factory=dict)
    elapsed: float = 0.0
    timed_out: bool = False

    @property
    def offset(self) -> int:
        return sum(event.alpha_offset for event in self.trace)


@dataclass(frozen=True)
class Solution:
    members: Tuple[int, ...]
    optimal: bool = True

    @classmethod
    def of(cls, members: Iterable[int], optimal: bool = True) -> "Solution":
        return cls(members=tuple(sorted(set(members))), optimal=optimal)

    @property
    def cardinality(self) -> int:
        return len(self.members)


def _average_edge_size(h: Hypergraph) -> float:
    if h.num_edges == 0:
        return 0.0
    return h.total_pins / h.num_edges


@dataclass
class StatsReport:
    n: int
    m: int
    e_avg: float
    n_r: int
    m_r: int
    e_avg_r: float
    t: float
    offset: int
    timed_out: bool = False
    rules: Dict[str, RuleStats] = field(default_factory=dict)

    @classmethod
    def from_reduction(cls, original: Hypergraph, result: KernelResult) -> "StatsReport":
        return cls(
            n=original.num_vertices,
            m=original.num_edges,
            e_avg=_average_edge_size(original),
            n_r=result.kernel.num_vertices,
            m_r=result.kernel.num_edges,
            e_avg_r=_average_edge_size(result.kernel),
            t=result.elapsed,
            offset=result.offset,
            timed_out=result.timed_out,
            rules={kind.value: result.stats.get(kind, RuleStats()) for kind in ReductionKind},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "e_avg": round(self.e_avg, 6),
            "n_r": self.n_r,
            "m_r": self.m_r,
            "e_avg_r": round(self.e_avg_r, 6),
            "t": round(self.t, 6),
            "offset": self.offset,
            "timed_out": self.timed_out,
            "rules": {name: stats.to_dict() for name, stats in self.rules.items()},
        }
