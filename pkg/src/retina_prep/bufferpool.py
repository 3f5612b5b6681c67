"""Reusable backing buffers for the large per-image arrays.

Allocating hundreds of megabytes per processed image costs more in page
faults than the arithmetic does, so the blur stack and reduction outputs
draw from a small pool instead. The pool permanently holds one reference
to each tracked buffer; a buffer is handed out again only when every
outside reference (including views) has died, which CPython's exact
reference counts make cheap to verify. Buffers never shrink or change
dtype; keys are exact shapes.
"""

from __future__ import annotations

import sys
import threading

import numpy as np

_LOCK = threading.Lock()
_POOL: dict[tuple[int, ...], list[np.ndarray]] = {}
_MAX_PER_SHAPE = 4

# bucket entry + loop variable + getrefcount argument
_IDLE_REFCOUNT = 3


def take(shape: tuple[int, ...]) -> np.ndarray:
    """A float64 C-contiguous array of ``shape``, possibly recycled."""
    key = tuple(int(s) for s in shape)
    with _LOCK:
        bucket = _POOL.setdefault(key, [])
        for arr in bucket:
            if sys.getrefcount(arr) == _IDLE_REFCOUNT:
                arr.flags.writeable = True
                return arr
        if len(bucket) < _MAX_PER_SHAPE:
            arr = np.empty(key)
            bucket.append(arr)
            return arr
    # pool is saturated; fall back to an untracked allocation
    return np.empty(key)


def clear() -> None:
    with _LOCK:
        _POOL.clear()
