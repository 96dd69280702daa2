import logging
from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import PlainTextResponse

from hymis.config import settings
from hymis.errors import HymisError, ParseError
from hymis.exact import solve_exact
from hymis.expansion import clique_expand
from hymis.formats import parse_hmetis, write_hmetis
from hymis.hypergraph import Hypergraph
from hymis.ilp import export_lp_graph, export_lp_hypergraph
from hymis.logging_utils import configure_logging, log_structured
from hymis.models import ReducerConfig, StatsReport
from hymis.reductions import lift_kernel_solution, reduce


configure_logging(settings.log_level)

app = FastAPI(title="hymis")


async def _read_instance(request: Request) -> Hypergraph:
    body = await request.body()
    try:
        return parse_hmetis(body.decode("utf-8", errors="replace"))
    except ParseError as exc:
        log_structured(logging.WARNING, "request_failed", path=request.url.path, error=str(exc))
        raise HTTPException(status_code=400, detail=str(exc))


def _config(rules: Optional[str], time_limit: Optional[float], no_unconfined: bool) -> ReducerConfig:
    names = rules.split(",") if rules else None
    limit = time_limit if time_limit is not None else settings.time_limit
    return ReducerConfig.from_names(names, time_limit=limit, unconfined_enabled=not no_unconfined)


async def _run(request: Request, func, *args: Any) -> Any:
    try:
        return await run_in_threadpool(func, *args)
    except HymisError as exc:
        log_structured(logging.WARNING, "request_failed", path=request.url.path, error=str(exc))
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
async def health() -> Dict[str, str]:
    return {"status": "ok"}


def _reduce_payload(h: Hypergraph, config: ReducerConfig) -> Dict[str, Any]:
    result = reduce(h, config)
    return {
        "stats": StatsReport.from_reduction(h, result).to_dict(),
        "kernel": write_hmetis(result.kernel),
        "map": result.id_map.vertex_map,
        "trace": [event.to_dict() for event in result.trace],
    }


@app.post("/reduce")
async def reduce_instance(
    request: Request,
    rules: Optional[str] = None,
    time_limit: Optional[float] = None,
    no_unconfined: bool = False,
) -> Dict[str, Any]:
    h = await _read_instance(request)
    config = await _run(request, _config, rules, time_limit, no_unconfined)
    return await _run(request, _reduce_payload, h, config)


def _solve_payload(h: Hypergraph, with_reduction: bool, time_limit: Optional[float]) -> Dict[str, Any]:
    if with_reduction:
        result = reduce(h)
        kernel_solution = solve_exact(result.kernel, limit=time_limit)
        solution = lift_kernel_solution(result, kernel_solution.members, original=h)
        optimal = kernel_solution.optimal and not result.timed_out
    else:
        solution = solve_exact(h, limit=time_limit)
        optimal = solution.optimal
    return {"solution": list(solution.members), "cardinality": solution.cardinality, "optimal": optimal}


@app.post("/solve")
async def solve_instance(
    request: Request,
    time_limit: Optional[float] = None,
    reduce_first: bool = True,
) -> Dict[str, Any]:
    h = await _read_instance(request)
    limit = time_limit if time_limit is not None else settings.exact_time_limit
    return await _run(request, _solve_payload, h, reduce_first, limit)


@app.post("/stats")
async def stats_instance(
    request: Request,
    rules: Optional[str] = None,
    time_limit: Optional[float] = None,
    no_unconfined: bool = False,
) -> Dict[str, Any]:
    h = await _read_instance(request)
    config = await _run(request, _config, rules, time_limit, no_unconfined)
    payload = await _run(request, _reduce_payload, h, config)
    return payload["stats"]


def _export_payload(h: Hypergraph, mode: str) -> str:
    if mode == "graph":
        return export_lp_graph(clique_expand(h)[0])
    return export_lp_hypergraph(h)


@app.post("/export-ilp", response_class=PlainTextResponse)
async def export_ilp(request: Request, mode: str = "hypergraph") -> str:
    if mode not in ("hypergraph", "graph"):
        raise HTTPException(status_code=422, detail="mode must be 'hypergraph' or 'graph'")
    h = await _read_instance(request)
    return await _run(request, _export_payload, h, mode)
