"""Clustering cost under the Fréchet distance, with caching and pruned argmins."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .frechet import DEFAULT_CONFIG, FrechetConfig, frechet_distance
from .geometry import CurveSet, PolygonalCurve

__all__ = ["CostEvaluator", "cost", "endpoint_lower_bounds"]

_LB_CHUNK = 1 << 20


def endpoint_lower_bounds(candidates: Sequence[PolygonalCurve], curves: Sequence[PolygonalCurve]) -> np.ndarray:
    """Per-candidate lower bound on ``cost(curves, candidate)``.

    Any matching pairs start with start and end with end, so
    ``d_F >= max(|a(0) - b(0)|, |a(1) - b(1)|)``.
    """
    cs = np.array([c.start for c in candidates])
    ce = np.array([c.end for c in candidates])
    ts = np.array([t.start for t in curves])
    te = np.array([t.end for t in curves])
    out = np.empty(len(candidates))
    step = max(1, _LB_CHUNK // max(1, len(curves)))
    for lo in range(0, len(candidates), step):
        hi = lo + step
        ds = np.linalg.norm(cs[lo:hi, None, :] - ts[None], axis=2)
        de = np.linalg.norm(ce[lo:hi, None, :] - te[None], axis=2)
        out[lo:hi] = np.maximum(ds, de).sum(axis=1)
    return out


class CostEvaluator:
    """Fréchet distances memoised on vertex contents.

    ``threads > 1`` evaluates batches of distances on a thread pool; the
    compiled distance kernel releases the GIL. Results do not depend on
    the thread count.
    """

    def __init__(self, cfg: FrechetConfig = DEFAULT_CONFIG, threads: int = 1, cache: bool = True) -> None:
        if threads < 1:
            raise ParameterError("threads must be >= 1")
        self.cfg = cfg
        self.threads = threads
        self._cache: dict[tuple[bytes, bytes], float] | None = {} if cache else None
        self._pool = ThreadPoolExecutor(threads) if threads > 1 else None
        self.evaluations = 0

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self) -> CostEvaluator:
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def dist(self, a: PolygonalCurve, b: PolygonalCurve) -> float:
        if self._cache is None:
            self.evaluations += 1
            return frechet_distance(a, b, self.cfg)
        ka, kb = a.key(), b.key()
        key = (ka, kb) if ka <= kb else (kb, ka)
        d = self._cache.get(key)
        if d is None:
            self.evaluations += 1
            # canonical argument order keeps the cached value symmetric
            d = frechet_distance(a, b, self.cfg) if ka <= kb else frechet_distance(b, a, self.cfg)
            self._cache[key] = d
        return d

    def distances(self, curves: Iterable[PolygonalCurve], center: PolygonalCurve) -> np.ndarray:
        curves = list(curves)
        if self._pool is not None and len(curves) > 1:
            return np.fromiter(self._pool.map(lambda t: self.dist(t, center), curves), float, len(curves))
        return np.fromiter((self.dist(t, center) for t in curves), float, len(curves))

    def distance_matrix(self, curves: Sequence[PolygonalCurve], centers: Sequence[PolygonalCurve]) -> np.ndarray:
        """``(len(curves), len(centers))`` matrix of Fréchet distances."""
        if not centers:
            return np.empty((len(curves), 0))
        return np.column_stack([self.distances(curves, c) for c in centers])

    def cost(self, curves: Iterable[PolygonalCurve], centers: Sequence[PolygonalCurve]) -> float:
        curves = list(curves)
        if not centers:
            return math.inf if curves else 0.0
        if not curves:
            return 0.0
        return float(self.distance_matrix(curves, list(centers)).min(axis=1).sum())

    def argmin(self, candidates: Sequence[PolygonalCurve], curves: Iterable[PolygonalCurve]) -> tuple[int, float]:
        """Index and cost of the candidate of least ``cost(curves, .)``.

        Ties go to the lowest index. Candidates are visited in order of their
        endpoint lower bound and a running sum is abandoned once it cannot
        beat the incumbent, so most candidates are never fully evaluated.
        """
        curves = list(curves)
        if not candidates or not curves:
            raise ParameterError("argmin needs non-empty candidates and curves")
        lbs = endpoint_lower_bounds(candidates, curves)
        ts = np.array([t.start for t in curves])
        te = np.array([t.end for t in curves])
        order = np.lexsort((np.arange(len(candidates)), lbs))
        best_i, best = -1, math.inf
        for i in order:
            i = int(i)
            if lbs[i] > best or (lbs[i] == best and i > best_i):
                break
            c = candidates[i]
            per = np.maximum(np.linalg.norm(ts - c.start, axis=1), np.linalg.norm(te - c.end, axis=1))
            rest = float(per.sum())
            total = 0.0
            for t, lb in zip(curves, per):
                rest -= lb
                total += self.dist(t, c)
                if total + rest > best:
                    break
            else:
                if total < best or (total == best and i < best_i):
                    best_i, best = i, total
        return best_i, best


def cost(t: CurveSet | Sequence[PolygonalCurve], centers: Sequence[PolygonalCurve], cfg: FrechetConfig = DEFAULT_CONFIG) -> float:
    """Sum over ``t`` of the Fréchet distance to the nearest center."""
    if not centers:
        raise ParameterError("cost needs at least one center")
    return CostEvaluator(cfg, cache=False).cost(t, centers)
