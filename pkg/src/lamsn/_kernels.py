"""Graph kernels over edge arrays: longest path to a sink and cycle detection.

Both backends peel the graph from its sinks (reverse Kahn).  A node removed in
round ``r`` has longest outgoing path ``r``; nodes never removed can reach a
cycle and get height -1.

The numba backend is used when numba imports and ``LAMSN_DISABLE_NUMBA`` is
unset or ``0``; otherwise the vectorized numpy path runs.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("LAMSN_DISABLE_NUMBA", "0") not in ("", "0")

try:
    if _DISABLE:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None


def heights_numpy(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    height = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return height
    outdeg = np.bincount(src, minlength=n)
    # reverse CSR: for each node the edges entering it
    order = np.argsort(dst, kind="stable")
    rsrc = src[order]
    rptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(dst, minlength=n), out=rptr[1:])
    frontier = np.flatnonzero(outdeg == 0)
    rnd = 0
    while frontier.size:
        height[frontier] = rnd
        starts = rptr[frontier]
        counts = rptr[frontier + 1] - starts
        if counts.sum() == 0:
            break
        idx = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(counts.sum())
        preds = rsrc[idx]
        dec = np.bincount(preds, minlength=n)
        touched = np.flatnonzero(dec)
        outdeg[touched] -= dec[touched]
        frontier = touched[outdeg[touched] == 0]
        rnd += 1
    return height


def _heights_loop(n, src, dst):
    height = np.full(n, -1, dtype=np.int64)
    outdeg = np.zeros(n, dtype=np.int64)
    indeg = np.zeros(n, dtype=np.int64)
    m = src.shape[0]
    for e in range(m):
        outdeg[src[e]] += 1
        indeg[dst[e]] += 1
    rptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        rptr[v + 1] = rptr[v] + indeg[v]
    fill = rptr[:-1].copy()
    rsrc = np.empty(m, dtype=np.int64)
    for e in range(m):
        d = dst[e]
        rsrc[fill[d]] = src[e]
        fill[d] += 1
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if outdeg[v] == 0:
            height[v] = 0
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        hv = height[v] + 1
        for k in range(rptr[v], rptr[v + 1]):
            u = rsrc[k]
            outdeg[u] -= 1
            if hv > height[u]:
                height[u] = hv
            if outdeg[u] == 0:
                queue[tail] = u
                tail += 1
    for v in range(n):
        if outdeg[v] != 0:
            height[v] = -1
    return height


if njit is not None:
    _heights_jit = njit(cache=True, nogil=True)(_heights_loop)
else:  # pragma: no cover
    _heights_jit = None


def heights_numba(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if _heights_jit is None:
        raise RuntimeError("numba backend unavailable")
    return _heights_jit(
        n, np.ascontiguousarray(src, dtype=np.int64), np.ascontiguousarray(dst, dtype=np.int64)
    )


def heights_python(n: int, src, dst) -> np.ndarray:
    """Uncompiled loop version; the reference the other two are tested against."""
    return _heights_loop(n, np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64))


BACKEND = "numba" if _heights_jit is not None else "numpy"


def heights(n: int, src, dst) -> np.ndarray:
    """Longest path length from each node to a sink, -1 if it reaches a cycle."""
    if BACKEND == "numba":
        return heights_numba(n, src, dst)
    return heights_numpy(n, src, dst)
