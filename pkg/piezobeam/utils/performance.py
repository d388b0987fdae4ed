"""Caching and timing helpers for repeated eigen-solves."""

import logging
import threading
import time
from contextlib import contextmanager
from functools import wraps
from typing import Any, Callable

from cachetools import LRUCache
from cachetools.keys import hashkey

from piezobeam.config import config

logger = logging.getLogger(__name__)

# Solutions keyed by immutable (layup, section, mesh, flags, count) arguments
solution_cache = LRUCache(maxsize=config.FEM_CACHE_SIZE)
_cache_lock = threading.Lock()
_cache_counters = {"hits": 0, "misses": 0}


def cached_solution(func: Callable) -> Callable:
    """
    Decorator to memoise a pure function of hashable arguments.

    Safe to call from sweep worker threads; two threads racing on the same
    key may both compute, the second store wins.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        key = hashkey(func.__name__, *args, **kwargs)

        with _cache_lock:
            if key in solution_cache:
                _cache_counters["hits"] += 1
                logger.debug(f"Cache hit for {func.__name__}")
                return solution_cache[key]
            _cache_counters["misses"] += 1

        result = func(*args, **kwargs)
        with _cache_lock:
            solution_cache[key] = result
        return result

    return wrapper


def clear_cache():
    """Clear all cached solutions and reset the counters."""
    with _cache_lock:
        solution_cache.clear()
        _cache_counters["hits"] = 0
        _cache_counters["misses"] = 0
    logger.info("Cleared solution cache")


def get_cache_stats() -> dict[str, Any]:
    """
    Get cache statistics.

    Returns:
        Dictionary with cache metrics
    """
    with _cache_lock:
        return {
            "size": len(solution_cache),
            "max_size": solution_cache.maxsize,
            "hits": _cache_counters["hits"],
            "misses": _cache_counters["misses"],
        }


@contextmanager
def timed(label: str):
    """Log the wall time of the enclosed block at INFO level."""
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        logger.info(f"{label} took {elapsed_ms:.1f} ms")
