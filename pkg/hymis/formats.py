import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from hymis.errors import InvalidArgumentError, ParseError
from hymis.graph import Graph
from hymis.hypergraph import Hypergraph, IdMap
from hymis.models import StatsReport, TraceEvent


PathLike = Union[str, "os.PathLike[str]"]


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        yield lineno, line


def _parse_ints(line: str, lineno: int) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", lineno) from None


def parse_hmetis(text: str) -> Hypergraph:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing header line") from None
    fields = _parse_ints(header, lineno)
    if len(fields) not in (2, 3):
        raise ParseError("header must be 'm n' or 'm n fmt'", lineno)
    if len(fields) == 3 and fields[2] != 0:
        raise ParseError(f"weighted hMetis format {fields[2]} is not supported", lineno)
    m, n = fields[0], fields[1]
    if m < 0 or n < 0:
        raise ParseError("negative edge or vertex count", lineno)

    h = Hypergraph(n)
    count = 0
    for lineno, line in lines:
        count += 1
        if count > m:
            raise ParseError(f"more than the {m} announced hyperedges", lineno)
        pins = _parse_ints(line, lineno)
        for pin in pins:
            if pin < 1 or pin > n:
                raise ParseError(f"pin {pin} outside of [1, {n}]", lineno)
        h.add_edge(pins)
    if count != m:
        raise ParseError(f"expected {m} hyperedges, found {count}")
    return h


def write_hmetis(h: Hypergraph) -> str:
    if not h.is_compact():
        raise InvalidArgumentError("hypergraph ids must be contiguous, compact it first")
    lines = [f"{h.num_edges} {h.num_vertices}"]
    lines.extend(" ".join(str(v) for v in h.pins(e)) for e in h.edges())
    return "\n".join(lines) + "\n"


def write_metis_graph(g: Graph) -> str:
    lines = [f"{g.num_vertices} {g.num_edges}"]
    lines.extend(" ".join(str(u) for u in g.neighbors(v)) for v in g.vertices())
    return "\n".join(lines) + "\n"


def parse_metis_graph(text: str) -> Graph:
    # blank lines are isolated vertices, so only comments are skipped
    rows = [(lineno, line) for lineno, line in enumerate(text.splitlines(), start=1)
            if not line.strip().startswith("%")]
    if not rows:
        raise ParseError("missing header line")
    lineno, header = rows[0]
    fields = _parse_ints(header, lineno)
    if len(fields) != 2:
        raise ParseError("header must be 'n m'", lineno)
    n, m = fields
    if len(rows) - 1 != n:
        raise ParseError(f"expected {n} adjacency lines, found {len(rows) - 1}")
    g = Graph(n)
    for v, (lineno, line) in enumerate(rows[1:], start=1):
        for u in _parse_ints(line, lineno):
            if u < 1 or u > n:
                raise ParseError(f"neighbour {u} outside of [1, {n}]", lineno)
            if u == v:
                raise ParseError(f"self-loop on vertex {v}", lineno)
            g.add_edge(u, v)
    if g.num_edges != m:
        raise ParseError(f"header announces {m} edges, adjacency lists hold {g.num_edges}")
    return g


def write_map(id_map: IdMap) -> str:
    return "".join(f"{i} {v}\n" for i, v in enumerate(id_map.vertex_map, start=1))


def parse_map(text: str) -> IdMap:
    vertex_map: List[int] = []
    for lineno, line in _content_lines(text):
        fields = _parse_ints(line, lineno)
        if len(fields) != 2 or fields[0] != len(vertex_map) + 1:
            raise ParseError("map lines must be 'kernel_id original_id' in order", lineno)
        vertex_map.append(fields[1])
    return IdMap(vertex_map=vertex_map)


def _compact_json(data: Any) -> str:
    return json.dumps(data, separators=(",", ":"), ensure_ascii=True)


def write_trace(trace: Iterable[TraceEvent]) -> str:
    return "".join(_compact_json(event.to_dict()) + "\n" for event in trace)


def parse_trace(text: str) -> List[TraceEvent]:
    trace = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
            if not isinstance(data, dict):
                raise ValueError("trace lines must be JSON objects")
            trace.append(TraceEvent.from_dict(data))
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"malformed trace event: {exc}", lineno) from None
    return trace


def write_solution(members: Iterable[int]) -> str:
    return "".join(f"{v}\n" for v in sorted(set(members)))


def parse_solution(text: str) -> List[int]:
    members = []
    for lineno, line in _content_lines(text):
        fields = _parse_ints(line, lineno)
        if len(fields) != 1:
            raise ParseError("one vertex id per line expected", lineno)
        members.append(fields[0])
    return sorted(set(members))


def write_stats(report: StatsReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"


STATS_CSV_COLUMNS = (
    "instance", "n", "m", "e_avg", "n_r", "m_r", "e_avg_r", "t", "offset", "timed_out", "error",
)


def write_stats_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=STATS_CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({column: row.get(column, "") for column in STATS_CSV_COLUMNS})
    return buffer.getvalue()


def stats_row(instance: str, report: StatsReport) -> Dict[str, Any]:
    row: Dict[str, Any] = {"instance": instance, "error": ""}
    row.update({k: v for k, v in report.to_dict().items() if k in STATS_CSV_COLUMNS})
    return row


def read_text(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_atomic(path: PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
