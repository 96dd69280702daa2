import json
import logging
import sys
import time
from typing import Any, Dict


logger = logging.getLogger("hymis")


def configure_logging(level: str) -> None:
    # stdout carries command results, log lines go to stderr
    logging.basicConfig(level=level.upper(), format="%(message)s", stream=sys.stderr)
    logging.getLogger("httpx").setLevel(logging.WARNING)


def _jsonable(value: Any) -> Any:
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)


def seconds_since(started: float) -> float:
    """Elapsed ``time.perf_counter`` seconds, rounded the way stats files store them."""
    return round(time.perf_counter() - started, 6)


def log_structured(level: int, message: str, **fields: Any) -> None:
    if not logger.isEnabledFor(level):
        return
    payload: Dict[str, Any] = {
        "ts": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "level": logging.getLevelName(level),
        "message": message,
    }
    payload.update(fields)
    logger.log(level, json.dumps(payload, ensure_ascii=True, default=_jsonable))
