from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from hymis.errors import ParseError, ResourceLimitError
from hymis.graph import Graph
from hymis.hypergraph import Hypergraph


TERMS_PER_LINE = 12
MAX_ENUMERATION_VARIABLES = 22


def _variable(v: int) -> str:
    return f"x{v}"


def _wrap(terms: Sequence[str], separator: str, prefix: str) -> List[str]:
    lines = []
    for start in range(0, len(terms), TERMS_PER_LINE):
        chunk = separator.join(terms[start:start + TERMS_PER_LINE])
        if start == 0:
            lines.append(f" {prefix}{chunk}")
        else:
            lines.append(f"   {separator.strip()} {chunk}" if separator.strip() else f"   {chunk}")
    return lines


def _document(variables: List[str], rows: List[tuple]) -> str:
    lines = ["Maximize"]
    lines.extend(_wrap(variables, " + ", "") if variables else [" 0"])
    lines.append("Subject To")
    for name, row in rows:
        body = _wrap(row, " + ", f"{name}: ")
        body[-1] += " <= 1"
        lines.extend(body)
    lines.append("Binary")
    lines.extend(_wrap(variables, " ", ""))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp_hypergraph(h: Hypergraph) -> str:
    variables = [_variable(v) for v in h.vertices()]
    rows = [(f"c{e}", [_variable(v) for v in h.pins(e)]) for e in h.edges()]
    return _document(variables, rows)


def export_lp_graph(g: Graph) -> str:
    variables = [_variable(v) for v in g.vertices()]
    rows = [
        (f"c{i}", [_variable(u), _variable(v)])
        for i, (u, v) in enumerate(g.edges(), start=1)
    ]
    return _document(variables, rows)


@dataclass
class LpConstraint:
    name: str
    variables: List[str]
    rhs: int


@dataclass
class LpModel:
    objective: List[str] = field(default_factory=list)
    constraints: List[LpConstraint] = field(default_factory=list)
    binaries: List[str] = field(default_factory=list)


_SECTIONS = {
    "maximize": "objective",
    "maximum": "objective",
    "max": "objective",
    "subject to": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "binary": "binary",
    "binaries": "binary",
    "bin": "binary",
}


def parse_lp(text: str) -> LpModel:
    """Read the packing models written by this module back in."""
    model = LpModel()
    section = None
    tokens: Dict[str, List[tuple]] = {"objective": [], "constraints": [], "binary": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key == "end":
            break
        if key in _SECTIONS:
            section = _SECTIONS[key]
            continue
        if section is None:
            raise ParseError("content before the objective section", lineno)
        tokens[section].extend((lineno, token) for token in line.split())

    model.objective = [t for _, t in tokens["objective"] if t not in ("+", "0")]
    model.binaries = [t for _, t in tokens["binary"]]

    current: List[str] = []
    name = None
    stream = iter(tokens["constraints"])
    for lineno, token in stream:
        if token.endswith(":"):
            name, current = token[:-1], []
        elif token == "<=":
            try:
                _, rhs = next(stream)
                value = int(rhs)
            except (StopIteration, ValueError):
                raise ParseError("constraint without integer right-hand side", lineno) from None
            if name is None:
                raise ParseError("unnamed constraint", lineno)
            model.constraints.append(LpConstraint(name, current, value))
            name, current = None, []
        elif token != "+":
            current.append(token)
    if name is not None:
        raise ParseError(f"constraint {name} is not terminated")
    return model


def enumerate_optimum(model: LpModel) -> int:
    """Best objective over all binary assignments (small models only)."""
    variables = sorted(set(model.objective) | set(model.binaries))
    if len(variables) > MAX_ENUMERATION_VARIABLES:
        raise ResourceLimitError(f"{len(variables)} variables are too many to enumerate")
    index = {name: i for i, name in enumerate(variables)}
    rows = []
    for row in model.constraints:
        mask = 0
        for name in row.variables:
            mask |= 1 << index[name]
        rows.append((mask, row.rhs))
    objective = 0
    for name in model.objective:
        objective |= 1 << index[name]

    best = 0
    for assignment in range(1 << len(variables)):
        if all(bin(assignment & mask).count("1") <= rhs for mask, rhs in rows):
            best = max(best, bin(assignment & objective).count("1"))
    return best
