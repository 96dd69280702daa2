import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from hymis.config import settings
from hymis.errors import InvalidArgumentError
from hymis.formats import (
    parse_hmetis,
    read_text,
    stats_row,
    write_atomic,
    write_hmetis,
    write_map,
    write_stats,
    write_trace,
)
from hymis.logging_utils import log_structured
from hymis.models import ReducerConfig, StatsReport
from hymis.reductions import reduce


INSTANCE_SUFFIX = ".hgr"


def kernel_paths(out_dir: Path, stem: str) -> Dict[str, Path]:
    return {
        "kernel": out_dir / f"{stem}.hgr",
        "map": out_dir / f"{stem}.map",
        "trace": out_dir / f"{stem}.trace.jsonl",
        "stats": out_dir / f"{stem}.stats.json",
    }


def process_instance(path: str, out_dir: str, config: ReducerConfig) -> Dict[str, Any]:
    source = Path(path)
    try:
        original = parse_hmetis(read_text(source))
        result = reduce(original, config)
        report = StatsReport.from_reduction(original, result)
        targets = kernel_paths(Path(out_dir), source.stem)
        write_atomic(targets["kernel"], write_hmetis(result.kernel))
        write_atomic(targets["map"], write_map(result.id_map))
        write_atomic(targets["trace"], write_trace(result.trace))
        write_atomic(targets["stats"], write_stats(report))
    except Exception as exc:  # noqa: BLE001
        log_structured(logging.ERROR, "batch_instance_failed", instance=source.name, error=str(exc))
        return {"instance": source.name, "error": f"{type(exc).__name__}: {exc}"}
    log_structured(logging.INFO, "batch_instance_done", instance=source.name, n_r=report.n_r, m_r=report.m_r)
    return stats_row(source.name, report)


def find_instances(directory: Path) -> List[Path]:
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix == INSTANCE_SUFFIX)


def run_batch(
    paths: Sequence[Path],
    out_dir: Path,
    config: ReducerConfig,
    workers: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """Reduce every instance independently, one worker process per instance."""
    if any(p.resolve().parent == out_dir.resolve() for p in paths):
        raise InvalidArgumentError(f"output directory {out_dir} holds input instances; kernels would overwrite them")
    limit = settings.threads if workers is None else min(workers, settings.threads)
    limit = max(1, min(limit, len(paths) or 1))
    out_dir.mkdir(parents=True, exist_ok=True)
    if limit == 1:
        rows = [process_instance(str(p), str(out_dir), config) for p in paths]
    else:
        with ProcessPoolExecutor(max_workers=limit) as pool:
            futures = [pool.submit(process_instance, str(p), str(out_dir), config) for p in paths]
            rows = [future.result() for future in futures]
    return sorted(rows, key=lambda row: row["instance"])
