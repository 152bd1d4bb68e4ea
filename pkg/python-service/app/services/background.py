from __future__ import annotations

import concurrent.futures
import threading
from typing import Callable, Iterable, List, Optional, TypeVar

from app.config import get_settings

T = TypeVar("T")
R = TypeVar("R")

_EXECUTOR: Optional[concurrent.futures.ThreadPoolExecutor] = None
_LOCK = threading.Lock()


def _get_executor() -> concurrent.futures.ThreadPoolExecutor:
    global _EXECUTOR
    with _LOCK:
        if _EXECUTOR is None:
            workers = get_settings().background_workers
            _EXECUTOR = concurrent.futures.ThreadPoolExecutor(max_workers=workers, thread_name_prefix="polar-bg")
        return _EXECUTOR


def run_parallel(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map ``func`` over ``items`` on the shared pool; results keep input order."""
    batch = list(items)
    if len(batch) <= 1:
        return [func(item) for item in batch]
    return list(_get_executor().map(func, batch))


__all__ = ["run_parallel"]
