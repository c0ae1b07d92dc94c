"""Approximate minimum-error l-simplification (vertex-restricted, factor 4).

The shortcut graph has an edge (i, j) whenever the segment v_i v_j is within
Fréchet distance r of the subcurve between v_i and v_j. The smallest r for
which a path v_1 -> v_m with at most l-1 edges exists is found by binary
search over the sorted edge errors. This minimises the largest per-edge
error exactly; the Fréchet error of the joined curve is at most that value
and within factor 4 of the best curve with at most l vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .frechet import DEFAULT_CONFIG, FrechetConfig, frechet_distance
from .geometry import PolygonalCurve

__all__ = ["SimplificationResult", "simplify", "shortcut_errors"]


@dataclass(frozen=True)
class SimplificationResult:
    curve: PolygonalCurve
    error: float
    indices: tuple[int, ...]


def shortcut_errors(t: PolygonalCurve, cfg: FrechetConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Matrix of Fréchet errors of shortcutting ``t`` from vertex i to vertex j (i < j).

    Entries on and below the diagonal are NaN.
    """
    v = t.vertices
    m = len(v)
    err = np.full((m, m), np.nan)
    for i in range(m - 1):
        err[i, i + 1] = 0.0
        for j in range(i + 2, m):
            err[i, j] = frechet_distance(v[[i, j]], v[i : j + 1], cfg)
    return err


def _shortest_path(err: np.ndarray, r: float) -> list[int] | None:
    # BFS from the end gives hop distances; walking forward greedily by
    # smallest index yields the lexicographically smallest shortest path.
    m = err.shape[0]
    ok = np.nan_to_num(err, nan=np.inf) <= r
    hops = [-1] * m
    hops[m - 1] = 0
    queue = deque([m - 1])
    while queue:
        j = queue.popleft()
        for i in range(j):
            if hops[i] < 0 and ok[i, j]:
                hops[i] = hops[j] + 1
                queue.append(i)
    if hops[0] < 0:
        return None
    path = [0]
    while path[-1] != m - 1:
        i = path[-1]
        path.append(next(j for j in range(i + 1, m) if ok[i, j] and hops[j] == hops[i] - 1))
    return path


def simplify(t: PolygonalCurve, l: int, cfg: FrechetConfig = DEFAULT_CONFIG) -> SimplificationResult:
    """Simplify ``t`` to at most ``l`` of its own vertices.

    First and last vertex are always kept. Among feasible paths at the
    smallest feasible radius the one with fewest edges, then the
    lexicographically smallest index sequence, is returned.
    """
    if l < 2:
        raise ParameterError(f"l must be >= 2, got {l}")
    if not isinstance(t, PolygonalCurve):
        t = PolygonalCurve(t)
    m = len(t)
    if m <= l:
        return SimplificationResult(t, 0.0, tuple(range(m)))
    err = shortcut_errors(t, cfg)
    radii = np.unique(err[~np.isnan(err)])
    lo, hi = 0, len(radii) - 1
    # the direct shortcut 0 -> m-1 is always feasible at the largest radius
    best = _shortest_path(err, radii[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        path = _shortest_path(err, radii[mid])
        if path is not None and len(path) <= l:
            hi, best = mid, path
        else:
            lo = mid + 1
    curve = PolygonalCurve(t.vertices[best])
    return SimplificationResult(curve, frechet_distance(t, curve, cfg), tuple(best))
