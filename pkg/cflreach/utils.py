"""
Utility functions for cflreach
"""

import logging
import time
from typing import Any, Callable, Dict, Iterator, Mapping, Sequence, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])


def iter_bits(row: int) -> Iterator[int]:
    """Yield the positions of set bits in ``row``, lowest first"""
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


def popcount(row: int) -> int:
    return bin(row).count("1")


def format_key_values(values: Mapping[str, Any]) -> str:
    """Render ``key=value`` lines in insertion order"""
    lines = []
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.6f}"
        lines.append(f"{key}={value}")
    return "\n".join(lines)


def fit_growth_exponent(sizes: Sequence[float], counts: Sequence[float]) -> float:
    """Least-squares slope of log(count) against log(size)"""
    if len(sizes) != len(counts) or len(sizes) < 2:
        raise ValueError("need at least two (size, count) points of equal length")
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.maximum(np.asarray(counts, dtype=float), 1.0))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def summarize(values: Sequence[float]) -> Dict[str, float]:
    """Median, mean, 95th percentile and maximum; zeros for no data"""
    if len(values) == 0:
        return {"median": 0.0, "mean": 0.0, "p95": 0.0, "max": 0.0}
    arr = np.asarray(values, dtype=float)
    return {
        "median": float(np.median(arr)),
        "mean": float(np.mean(arr)),
        "p95": float(np.percentile(arr, 95)),
        "max": float(np.max(arr)),
    }


def mean_or_zero(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else 0.0


def retry_with_backoff(func: F, max_retries: int = 3, base_delay: float = 1.0) -> F:
    """Retry function with exponential backoff"""

    def wrapper(*args: Any, **kwargs: Any) -> Any:
        last_exception = None

        for attempt in range(max_retries + 1):
            try:
                return func(*args, **kwargs)
            except Exception as e:
                last_exception = e

                # Don't retry on the last attempt
                if attempt == max_retries:
                    break

                from .exceptions import is_retriable_error
                if not is_retriable_error(e):
                    break

                delay = base_delay * (2 ** attempt)
                retry_after = getattr(e, "details", {}).get("retry_after")
                if isinstance(retry_after, (int, float)):
                    delay = max(delay, float(retry_after))
                logger.warning("retrying after %s (attempt %d, sleeping %.1fs)", e, attempt + 1, delay)
                time.sleep(delay)

        raise last_exception  # type: ignore[misc]

    return wrapper  # type: ignore[return-value]
