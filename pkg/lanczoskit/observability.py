from __future__ import annotations

import json
import logging
import threading
import time
from collections import defaultdict
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

logger = logging.getLogger("lanczoskit")

if not logger.handlers:
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
logger.setLevel(logging.INFO)

_HISTORY_LIMIT = 2000

_lock = threading.Lock()
_counters: dict[str, int] = defaultdict(int)
_timings_ms: dict[str, list[float]] = defaultdict(list)


def log_event(event: str, level: int = logging.INFO, **fields: Any) -> None:
    payload = {"event": event, **fields}
    logger.log(level, json.dumps(payload, separators=(",", ":"), sort_keys=True, default=str))


def increment(name: str, value: int = 1) -> None:
    with _lock:
        _counters[name] += value


def observe_ms(name: str, value: float) -> None:
    with _lock:
        history = _timings_ms[name]
        history.append(float(value))
        if len(history) > _HISTORY_LIMIT:
            del history[:-_HISTORY_LIMIT]


@contextmanager
def timed(event: str, **fields: Any) -> Iterator[dict[str, Any]]:
    """Log ``event`` with its wall time once the block exits.

    The yielded dict may be filled with extra fields by the caller.
    """
    extra: dict[str, Any] = {}
    t0 = time.perf_counter()
    status = "error"
    try:
        yield extra
        status = "ok"
    finally:
        duration_ms = (time.perf_counter() - t0) * 1000.0
        observe_ms(f"{event}.duration_ms", duration_ms)
        log_event(event, status=status, duration_ms=round(duration_ms, 2), **fields, **extra)


def _p95(values: list[float]) -> float:
    ordered = sorted(values)
    return ordered[max(0, int(0.95 * len(ordered)) - 1)]


def snapshot() -> dict[str, Any]:
    with _lock:
        timings = {
            name: {"count": len(values), "p95": _p95(values) if values else 0.0}
            for name, values in _timings_ms.items()
        }
        return {"counters": dict(_counters), "timings_ms": timings}


def reset() -> None:
    with _lock:
        _counters.clear()
        _timings_ms.clear()
