import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from hymis.batch import find_instances, run_batch
from hymis.config import settings
from hymis.errors import (
    InvalidArgumentError,
    InvalidSolutionError,
    ParseError,
    ResourceLimitError,
    StructuralIntegrityError,
)
from hymis.exact import solve_exact, violated_edges
from hymis.expansion import clique_expand
from hymis.formats import (
    parse_hmetis,
    parse_map,
    parse_solution,
    parse_trace,
    read_text,
    write_atomic,
    write_hmetis,
    write_map,
    write_metis_graph,
    write_solution,
    write_stats,
    write_stats_csv,
    write_trace,
)
from hymis.ilp import export_lp_graph, export_lp_hypergraph
from hymis.logging_utils import configure_logging, log_structured
from hymis.models import ReducerConfig, StatsReport
from hymis.reductions import lift_solution, reduce


# a batch run exits with EXIT_STRUCTURE when any instance failed
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_STRUCTURE = 3
EXIT_RESOURCE = 4


def _reducer_config(args: argparse.Namespace) -> ReducerConfig:
    names = args.rules.split(",") if args.rules else None
    time_limit = args.time_limit if args.time_limit is not None else settings.time_limit
    return ReducerConfig.from_names(names, time_limit=time_limit, unconfined_enabled=not args.no_unconfined)


def _load(path: str):
    return parse_hmetis(read_text(path))


def _emit(path: Optional[str], text: str) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_reduce(args: argparse.Namespace) -> int:
    config = _reducer_config(args)
    if args.dir:
        if not args.out_dir:
            raise InvalidArgumentError("--dir needs --out-dir")
        paths = find_instances(Path(args.dir))
        rows = run_batch(paths, Path(args.out_dir), config, workers=args.workers)
        csv_text = write_stats_csv(rows)
        _emit(args.csv, csv_text)
        return EXIT_OK if all(not row.get("error") for row in rows) else EXIT_STRUCTURE

    if not args.input or not args.out:
        raise InvalidArgumentError("reduce needs an input file and --out")
    original = _load(args.input)
    result = reduce(original, config)
    out = Path(args.out)
    write_atomic(out, write_hmetis(result.kernel))
    write_atomic(out.with_suffix(".map"), write_map(result.id_map))
    write_atomic(args.trace or out.with_suffix(".trace.jsonl"), write_trace(result.trace))
    write_atomic(args.stats or out.with_suffix(".stats.json"), write_stats(StatsReport.from_reduction(original, result)))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    h = _load(args.input)
    limit = args.time_limit if args.time_limit is not None else settings.exact_time_limit
    solution = solve_exact(h, limit=limit)
    members = list(solution.members)
    if args.lift:
        map_path = args.map or str(Path(args.input).with_suffix(".map"))
        id_map = parse_map(read_text(map_path))
        if len(id_map.vertex_map) != h.num_vertices:
            raise InvalidArgumentError(f"{map_path} maps {len(id_map.vertex_map)} vertices, kernel has {h.num_vertices}")
        trace = parse_trace(read_text(args.lift))
        members = list(lift_solution(trace, id_map.original_vertices(members)).members)
    if not solution.optimal:
        log_structured(logging.WARNING, "solve_not_optimal", cardinality=len(members))
    _emit(args.out, write_solution(members))
    print(f"cardinality {len(members)}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    graph, _ = clique_expand(_load(args.input))
    _emit(args.out, write_metis_graph(graph))
    return EXIT_OK


def cmd_export_ilp(args: argparse.Namespace) -> int:
    h = _load(args.input)
    if args.mode == "graph":
        text = export_lp_graph(clique_expand(h)[0])
    else:
        text = export_lp_hypergraph(h)
    _emit(args.out, text)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    h = _load(args.input)
    members = parse_solution(read_text(args.solution))
    violated = violated_edges(h, members)
    if violated:
        e = violated[0]
        print(f"not independent: edge {e} {h.pins(e)} holds {sorted(set(h.pins(e)) & set(members))}")
        return EXIT_INVALID
    print(f"independent, cardinality {len(members)}")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    original = _load(args.input)
    result = reduce(original, _reducer_config(args))
    sys.stdout.write(write_stats(StatsReport.from_reduction(original, result)))
    return EXIT_OK


def _add_reducer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rules", help="comma separated rule names, e.g. DegreeZero,DegreeOne")
    parser.add_argument("--time-limit", type=float, help="seconds before the reduction stops")
    parser.add_argument("--no-unconfined", action="store_true", help="skip the unconfined rule")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hymis", description="Maximum strong independent set kernelization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce an instance to its kernel")
    p.add_argument("input", nargs="?")
    p.add_argument("--out", help="kernel .hgr; the .map file is written next to it")
    p.add_argument("--trace")
    p.add_argument("--stats")
    p.add_argument("--dir", help="reduce every .hgr in this directory")
    p.add_argument("--out-dir")
    p.add_argument("--csv", help="batch stats CSV (stdout when omitted)")
    p.add_argument("--workers", type=int, help="batch workers, at most HYMIS_THREADS")
    _add_reducer_flags(p)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("solve", help="solve exactly, optionally lifting a kernel solution")
    p.add_argument("input")
    p.add_argument("--lift", help="trace of the reduction that produced the input kernel")
    p.add_argument("--map", help="kernel map file (default: input with .map suffix)")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("expand", help="clique expansion to METIS graph format")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("export-ilp", help="write the integer program in LP format")
    p.add_argument("input")
    p.add_argument("--mode", choices=("hypergraph", "graph"), default="hypergraph")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_export_ilp)

    p = sub.add_parser("verify", help="check that a solution is strongly independent")
    p.add_argument("input")
    p.add_argument("solution")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("stats", help="print n, m, average edge size before and after reduction")
    p.add_argument("input")
    _add_reducer_flags(p)
    p.set_defaults(handler=cmd_stats)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging(settings.log_level)
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        code, error = EXIT_PARSE, exc
    except OSError as exc:
        code, error = EXIT_PARSE, exc
    except (StructuralIntegrityError, InvalidArgumentError) as exc:
        code, error = EXIT_STRUCTURE, exc
    except InvalidSolutionError as exc:
        code, error = EXIT_INVALID, exc
    except ResourceLimitError as exc:
        code, error = EXIT_RESOURCE, exc
    log_structured(logging.ERROR, "command_failed", command=args.command, error=str(error))
    print(f"error: {error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
