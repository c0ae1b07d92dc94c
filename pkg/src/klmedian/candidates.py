"""Grid-based candidate generation by simple and advanced shortcutting.

``candidates_simple`` and ``candidates_advanced`` return candidate sets for
the recursive k-median scheme; ``median5`` is the standalone practical
(1,l)-median. All three cover balls around input vertices with grids and
enumerate every curve of at most 2l-2 vertices over the grid points.

The grids prescribed by the sample-size and radius formulas are enormous.
``EnumerationCaps`` bounds the work: with ``overflow="truncate"`` generation
stops at the cap and the result is flagged ``truncated``; with
``overflow="coarsen"`` the cell width is widened just enough to fit the
budget and the result is flagged ``coarsened``.

With ``restrict=True`` (the default) grid points are only kept where a good
candidate can have its vertices. If c* is within factor kappa of the optimal
median of a cluster T' of T with |T'| >= |T|/beta, and c is any reference
curve, then some curve of T' is within rho = kappa * beta * cost(T, c) / |T|
of c*. So the first vertex of c* lies within rho of a start point of T, the
last within rho of an end point, and every vertex within rho of some curve of
T. Enumeration then runs over three pools (start, inner, end) and never
drops a candidate the approximation guarantee relies on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .cost import CostEvaluator
from .errors import ParameterError, ResourceError
from .geometry import Ball, CurveSet, PolygonalCurve, cover_ball, normalize_curve
from .median_seed import FAITHFUL, SampleScale, SeedParams, median34, sample_uniform, scaled
from .rng import child

__all__ = [
    "Candidate",
    "CandidateParams",
    "CandidateSet",
    "EnumerationCaps",
    "advanced_grid",
    "advanced_sample_size",
    "candidates_advanced",
    "candidates_simple",
    "enumerate_curves",
    "iter_curves",
    "iter_region_curves",
    "median5",
    "median5_grid",
    "median5_sample_sizes",
    "simple_grid",
    "simple_sample_size",
    "subset_size",
]

SEED = "seed-median"
GRID = "grid-enumeration"
ADVANCED_MAX_EPSILON = 0.158
_MAX_FIT_STEPS = 200
# union boxes up to this many cells are scanned in one vectorized pass
_DENSE_CELLS = 50_000


# -- formulas ---------------------------------------------------------------


def simple_sample_size(beta: float, delta: float, eps_prime: float) -> int:
    return math.ceil(-8 * beta / eps_prime * (math.log(delta) - math.log(4)))


def subset_size(sample_size: int, beta: float) -> int:
    return max(1, math.ceil(sample_size / (2 * beta)))


def simple_grid(delta: float, n: int, sample_size: int, cost_est: float, eps_prime: float, d: int) -> tuple[float, float]:
    """Ball radius and cell width for one subset of the simple generator."""
    lower = delta * n / (2 * sample_size) * cost_est / 34
    upper = cost_est / eps_prime
    return (1 + eps_prime) * upper, 2 * eps_prime / (n * math.sqrt(d)) * lower


def advanced_sample_size(beta: float, delta: float, eps_prime: float, l: int) -> int:
    # 2l - 4 vanishes at l = 2; clamp so the logarithm stays defined
    return math.ceil(-8 * beta * l / eps_prime * (math.log(delta) - math.log(4 * max(2 * l - 4, 1))))


def advanced_grid(delta: float, n: int, sample_size: int, cost_est: float, eps_prime: float, l: int, d: int) -> tuple[float, float]:
    lower = 2 * delta * n / (4 * sample_size) * cost_est / 34
    upper = cost_est / eps_prime
    return 4 * l / eps_prime * upper, 2 * eps_prime / (n * math.sqrt(d)) * lower


def median5_sample_sizes(delta: float, eps_prime: float) -> tuple[int, int]:
    s = math.ceil(-2 / eps_prime * (math.log(delta) - math.log(4)))
    inner = math.ceil(-8 / eps_prime * (math.log(delta) - math.log(4)))
    w = math.ceil(-64 / eps_prime**2 * (math.log(delta) - math.log(inner)))
    return s, w


def median5_grid(cost_est: float, eps_prime: float, n: int, d: int) -> tuple[float, float]:
    """``cost_est`` is the seed cost divided by 34."""
    return (3 + 4 * eps_prime) / n * 34 * cost_est, 2 * eps_prime * cost_est / (n * math.sqrt(d))


# -- parameters and results -------------------------------------------------


@dataclass(frozen=True)
class EnumerationCaps:
    max_grid_points: int = 10**6
    max_candidates: int = 10**5
    overflow: str = "truncate"
    restrict: bool = True

    def __post_init__(self) -> None:
        if self.max_grid_points < 1 or self.max_candidates < 1:
            raise ParameterError("caps must be >= 1")
        if self.overflow not in ("truncate", "coarsen"):
            raise ParameterError(f"unknown overflow policy {self.overflow!r}")


@dataclass(frozen=True)
class CandidateParams:
    beta: float
    delta: float
    epsilon: float
    l: int
    scale: SampleScale = FAITHFUL
    caps: EnumerationCaps = field(default_factory=EnumerationCaps)

    def __post_init__(self) -> None:
        if not self.beta >= 1:
            raise ParameterError(f"beta must be >= 1, got {self.beta}")
        if not 0 < self.delta < 1:
            raise ParameterError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0 < self.epsilon < 1:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.l < 2:
            raise ParameterError(f"l must be >= 2, got {self.l}")


@dataclass(frozen=True)
class Candidate:
    curve: PolygonalCurve
    provenance: str


@dataclass
class CandidateSet:
    curves: list[PolygonalCurve] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    truncated: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def add(self, cand: Candidate) -> None:
        self.curves.append(cand.curve)
        self.provenance.append(cand.provenance)


# -- enumeration ------------------------------------------------------------


def iter_curves(points: np.ndarray, max_vertices: int) -> Iterator[PolygonalCurve]:
    """Lazily yield normalized curves over ``points`` with 1..max_vertices vertices.

    Sequences with repeated consecutive indices are skipped; the order is by
    length, then lexicographic in point index. Curves equal after
    normalization are yielded once.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) == 0:
        raise ParameterError("enumeration needs a non-empty (N, d) point array")
    if max_vertices < 1:
        raise ParameterError("max_vertices must be >= 1")
    seen: set[bytes] = set()
    n = len(pts)
    for length in range(1, max_vertices + 1):
        for seq in itertools.product(range(n), repeat=length):
            if any(a == b for a, b in zip(seq, seq[1:])):
                continue
            curve = PolygonalCurve(pts[list(seq)]) if length <= 2 else normalize_curve(pts[list(seq)])
            key = curve.key()
            if key in seen:
                continue
            seen.add(key)
            yield curve


def enumerate_curves(points, max_vertices: int, caps: EnumerationCaps = EnumerationCaps()) -> tuple[list[PolygonalCurve], bool]:
    """Materialize ``iter_curves`` up to ``caps.max_candidates``; returns ``(curves, truncated)``."""
    out = list(itertools.islice(iter_curves(points, max_vertices), caps.max_candidates + 1))
    if len(out) > caps.max_candidates:
        return out[: caps.max_candidates], True
    return out, False


def _fit_width(radius: float, width: float, n_balls: int, d: int, budget: int) -> float | None:
    """Smallest width >= ``width`` whose cell bounding boxes fit ``budget``; None if none does."""
    per_axis = math.floor((budget / n_balls) ** (1.0 / d) + 1e-9)
    if per_axis < 3:
        return None
    need = 2 * radius / (per_axis - 2)
    return max(width, need)


def _bbox_cells(radius: float, width: float, d: int) -> int:
    return (math.floor(2 * radius / width) + 2) ** d


class _Pool:
    """Grid points covering a group of balls of common radius and width."""

    def __init__(self, centers: np.ndarray, radius: float, width: float, caps: EnumerationCaps, budget: int) -> None:
        self.coarsened = False
        self.truncated = False
        self.width = width
        self.radius = radius
        d = centers.shape[1]
        if radius == 0 or width == 0:
            self.points = np.unique(centers, axis=0)
            return
        budget = max(1, min(budget, caps.max_grid_points))
        if caps.overflow == "coarsen" and len(centers) * _bbox_cells(radius, width, d) > budget:
            fitted = _fit_width(radius, width, len(centers), d, budget)
            self.coarsened = True
            if fitted is None:
                self.width = math.inf
                self.points = np.unique(centers, axis=0)
                return
            self.width = fitted
        chunks = []
        remaining = caps.max_grid_points
        for c in centers:
            try:
                g = cover_ball(Ball(c, radius), self.width, max_cells=remaining)
            except ResourceError:
                self.truncated = True
                break
            remaining -= _bbox_cells(radius, self.width, d)
            chunks.append(g)
        self.points = np.unique(np.vstack(chunks), axis=0) if chunks else np.empty((0, d))


def _pool_budget(caps: EnumerationCaps, n_pools: int, l: int) -> int:
    # points whose (2l-2)-vertex enumeration fits this pool's share of the candidates
    share = max(1, caps.max_candidates // max(1, n_pools))
    return max(1, math.floor(share ** (1.0 / (2 * l - 2)) + 1e-9))


# -- restricted pools -------------------------------------------------------


@dataclass(frozen=True)
class _Region:
    starts: np.ndarray
    ends: np.ndarray
    segments: np.ndarray  # (S, 2, d)
    rho: float

    @classmethod
    def of(cls, t: CurveSet, rho: float) -> _Region:
        segs = []
        for c in t:
            v = c.vertices
            segs.append(np.stack([v, v], axis=1) if len(v) == 1 else np.stack([v[:-1], v[1:]], axis=1))
        return cls(
            np.unique(np.array([c.start for c in t]), axis=0),
            np.unique(np.array([c.end for c in t]), axis=0),
            np.unique(np.concatenate(segs), axis=0),
            float(rho),
        )


def _segment_distance(g: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    n2 = float(ab @ ab)
    if n2 == 0.0:
        return np.linalg.norm(g - a, axis=1)
    s = np.clip((g - a) @ ab / n2, 0.0, 1.0)
    return np.linalg.norm(g - (a + s[:, None] * ab), axis=1)


def _lattice_near(region: _Region, which: str, width: float, limit: int) -> tuple[np.ndarray, bool]:
    """Lattice points within rho of the starts, ends or segments; ``(points, overflowed)``."""
    rho = region.rho
    if which == "inner":
        a_all, b_all = region.segments[:, 0], region.segments[:, 1]
    else:
        a_all = b_all = region.starts if which == "start" else region.ends
    dense = _dense_near(a_all, b_all, rho, width)
    if dense is not None:
        return (dense[:limit], True) if len(dense) > limit else (dense, False)
    if which == "inner":
        shapes = [((a + b) / 2, float(np.linalg.norm(b - a)) / 2, a, b) for a, b in region.segments]
    else:
        pts = region.starts if which == "start" else region.ends
        shapes = [(p, 0.0, p, p) for p in pts]
    chunks, total = [], 0
    for mid, half, a, b in shapes:
        try:
            g = cover_ball(Ball(mid, half + rho), width, max_cells=max(limit, 1))
        except ResourceError:
            return _unique(chunks, region), True
        g = g[_segment_distance(g, a, b) <= rho]
        chunks.append(g)
        total += len(g)
        if total > limit:
            chunks = [_unique(chunks, region)]
            total = len(chunks[0])
            if total > limit:
                return chunks[0][:limit], True
    return _unique(chunks, region), False


def _dense_near(a: np.ndarray, b: np.ndarray, rho: float, width: float) -> np.ndarray | None:
    # all lattice points within rho of some segment a_i-b_i, or None if the union box is too big
    lo = np.ceil((np.minimum(a, b).min(axis=0) - rho) / width).astype(np.int64)
    hi = np.floor((np.maximum(a, b).max(axis=0) + rho) / width).astype(np.int64)
    if np.any(hi < lo):
        return np.empty((0, a.shape[1]))
    if math.prod(int(x) for x in hi - lo + 1) > _DENSE_CELLS:
        return None
    axes = [np.arange(x, y + 1, dtype=np.int64) for x, y in zip(lo, hi)]
    g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo)) * width
    ab = b - a
    n2 = np.einsum("ij,ij->i", ab, ab)
    rel = g[:, None, :] - a[None]
    s = np.clip(np.einsum("gsd,sd->gs", rel, ab) / np.where(n2 > 0, n2, 1.0), 0.0, 1.0)
    dist = np.linalg.norm(rel - s[..., None] * ab[None], axis=2)
    return np.unique(g[(dist <= rho).any(axis=1)], axis=0)


def _unique(chunks: list[np.ndarray], region: _Region) -> np.ndarray:
    return np.unique(np.vstack(chunks), axis=0) if chunks else np.empty((0, region.starts.shape[1]))


def _in_cover(g: np.ndarray, centers: np.ndarray, radius: float, width: float) -> np.ndarray:
    # same closed-cell test as cover_ball
    keep = np.zeros(len(g), dtype=bool)
    for c in centers:
        keep |= np.linalg.norm(np.clip(c, g, g + width) - c, axis=1) <= radius
    return g[keep]


class _RegionPools:
    """Start, inner and end pools: grid points of the covered balls inside the region."""

    def __init__(self, region: _Region, centers: np.ndarray, radius: float, width: float, caps: EnumerationCaps, budget: int) -> None:
        self.coarsened = False
        self.truncated = False
        self.width = width
        empty = np.empty((0, centers.shape[1]))
        if region.rho == 0:
            # the reference curve already has zero cost
            self.start = self.inner = self.end = empty
            return
        if radius == 0 or width == 0:
            pts = np.unique(centers, axis=0)
            self.start, self.inner, self.end = (
                pts[np.array([_near(region, w, p) for p in pts], dtype=bool)] for w in ("start", "inner", "end")
            )
            return
        if caps.overflow == "coarsen":
            self._fit(region, centers, radius, width, max(1, budget))
        else:
            self._build(region, centers, radius, width, caps.max_grid_points)

    def _build(self, region, centers, radius, width, limit) -> bool:
        pools = []
        for which in ("start", "inner", "end"):
            g, over = _lattice_near(region, which, width, limit)
            self.truncated |= over
            pools.append(_in_cover(g, centers, radius, width))
        self.start, self.inner, self.end = pools
        self.width = width
        return max(len(p) for p in pools)

    def _fit(self, region, centers, radius, width, budget) -> None:
        d = centers.shape[1]
        w = max(width, 2 * region.rho / budget ** (1.0 / d))
        for _ in range(_MAX_FIT_STEPS):
            self.truncated = False
            worst = self._build(region, centers, radius, w, 4 * budget)
            if not self.truncated and worst <= budget:
                break
            w *= 2.0 if self.truncated else max(1.05, (worst / budget) ** (1.0 / d))
        else:
            empty = np.empty((0, d))
            self.start = self.inner = self.end = empty
            self.truncated = True
        self.coarsened = self.width > width


def _near(region: _Region, which: str, p: np.ndarray) -> bool:
    if which == "inner":
        return any(_segment_distance(p[None], a, b)[0] <= region.rho for a, b in region.segments)
    pts = region.starts if which == "start" else region.ends
    return bool((np.linalg.norm(pts - p, axis=1) <= region.rho).any())


def iter_region_curves(start: np.ndarray, inner: np.ndarray, end: np.ndarray, max_vertices: int) -> Iterator[PolygonalCurve]:
    """Curves with first vertex from ``start``, last from ``end`` and the rest from ``inner``.

    Single-vertex curves use points in both ``start`` and ``end``. Order is by
    length, then lexicographic in pool index; duplicates after normalization
    are yielded once.
    """
    seen: set[bytes] = set()
    end_keys = {p.tobytes() for p in end}
    for p in start:
        if p.tobytes() in end_keys:
            curve = PolygonalCurve(p[None])
            seen.add(curve.key())
            yield curve
    for length in range(2, max_vertices + 1):
        for seq in itertools.product(start, *([inner] * (length - 2)), end):
            if any(np.array_equal(a, b) for a, b in zip(seq, seq[1:])):
                continue
            v = np.array(seq)
            curve = PolygonalCurve(v) if length == 2 else normalize_curve(v)
            key = curve.key()
            if key in seen:
                continue
            seen.add(key)
            yield curve


class _Collector:
    def __init__(self, caps: EnumerationCaps) -> None:
        self.out = CandidateSet()
        self.seen: set[bytes] = set()
        self.caps = caps

    @property
    def full(self) -> bool:
        return len(self.out) >= self.caps.max_candidates

    def add(self, curve: PolygonalCurve, tag: str) -> None:
        key = curve.key()
        if key not in self.seen:
            self.seen.add(key)
            self.out.add(Candidate(curve, tag))

    def add_grid(self, points: np.ndarray, max_vertices: int) -> None:
        if len(points) == 0:
            return
        self._drain(iter_curves(points, max_vertices))

    def add_region(self, pools: _RegionPools, max_vertices: int) -> None:
        if len(pools.start) == 0 or len(pools.end) == 0:
            return
        self._drain(iter_region_curves(pools.start, pools.inner, pools.end, max_vertices))

    def _drain(self, curves: Iterator[PolygonalCurve]) -> None:
        for curve in curves:
            if self.full:
                self.out.truncated = True
                return
            self.add(curve, GRID)


def _subset_iteration(t, params: CandidateParams, rng, eps_prime: float, sample_size_fn):
    """Shared front half of the subset generators: sample S and walk its subsets."""
    n = len(t)
    s_size = scaled(sample_size_fn(), params.scale)
    sample = sample_uniform(t, s_size, child(rng, 0))
    k = min(subset_size(s_size, params.beta), s_size)
    total = math.comb(s_size, k)
    diag = {
        "n": n,
        "sample_size": s_size,
        "subset_size": k,
        "subsets_total": total,
        "subsets_processed": 0,
        "eps_prime": eps_prime,
        "scale": {"factor": params.scale.factor, "mode": params.scale.mode},
        "coarsened": False,
        "grid_truncated": False,
    }
    return sample, k, total, diag


def _region(t: CurveSet, ref: PolygonalCurve, kappa: float, beta: float, evaluator: CostEvaluator) -> _Region:
    return _Region.of(t, kappa * beta * evaluator.cost(t, [ref]) / len(t))


def _note(diag: dict, pool) -> None:
    diag["coarsened"] |= pool.coarsened
    diag["grid_truncated"] |= pool.truncated
    diag["cell_width"] = max(diag.get("cell_width", 0.0), pool.width)


def _check(t: CurveSet) -> None:
    if len(t) == 0:
        raise ParameterError("candidate generation needs a non-empty curve set")


def candidates_simple(
    t: CurveSet,
    params: CandidateParams,
    rng: np.random.Generator,
    evaluator: CostEvaluator | None = None,
) -> CandidateSet:
    """Candidates containing a (3+eps)-approximate median of every large enough subset.

    Each subset of the sample gets a seed median; around every vertex of every
    subset curve a grid is laid (one point pool per curve) and all curves with
    at most 2l-2 vertices over that pool are emitted.
    """
    _check(t)
    evaluator = evaluator or CostEvaluator()
    caps = params.caps
    eps_prime = params.epsilon / 3
    n, d = len(t), t.dim
    sample, k, total, diag = _subset_iteration(
        t, params, rng, eps_prime, lambda: simple_sample_size(params.beta, params.delta, eps_prime)
    )
    col = _Collector(caps)
    n_pools = min(total, caps.max_candidates) * (1 if caps.restrict else k)
    budget = _pool_budget(caps, n_pools, params.l)
    for idx, combo in enumerate(itertools.combinations(range(len(sample)), k)):
        if idx >= caps.max_candidates or (col.full and idx > 0):
            col.out.truncated = True
            break
        sub = sample.subset(combo)
        c = median34(sub, SeedParams(params.delta / 4, params.l, params.scale), child(rng, 1, idx), evaluator)
        delta_cost = evaluator.cost(sub, [c])
        radius, width = simple_grid(params.delta, n, len(sample), delta_cost, eps_prime, d)
        col.add(c, SEED)
        region = _region(t, c, 3 + params.epsilon, params.beta, evaluator) if caps.restrict else None
        done: set[tuple[bytes, ...]] = set()
        for s in sub:
            if region is None:
                pool = _Pool(s.vertices, radius, width, caps, budget)
                _note(diag, pool)
                col.add_grid(pool.points, 2 * params.l - 2)
                continue
            pools = _RegionPools(region, s.vertices, radius, width, caps, budget)
            _note(diag, pools)
            key = (pools.start.tobytes(), pools.inner.tobytes(), pools.end.tobytes())
            if key not in done:
                done.add(key)
                col.add_region(pools, 2 * params.l - 2)
        diag["subsets_processed"] = idx + 1
    out = col.out
    out.truncated = out.truncated or diag["grid_truncated"]
    out.diagnostics = diag
    return out


def candidates_advanced(
    t: CurveSet,
    params: CandidateParams,
    rng: np.random.Generator,
    evaluator: CostEvaluator | None = None,
) -> CandidateSet:
    """Candidates containing a (1+eps)-approximate median of every large enough subset.

    Unlike ``candidates_simple`` the point pool is shared by all curves of a
    subset and the balls are much larger. Requires ``epsilon <= 0.158``.
    """
    _check(t)
    if params.epsilon > ADVANCED_MAX_EPSILON:
        raise ParameterError(f"advanced shortcutting needs epsilon <= {ADVANCED_MAX_EPSILON}")
    evaluator = evaluator or CostEvaluator()
    caps = params.caps
    eps_prime = params.epsilon / 6
    n, d, l = len(t), t.dim, params.l
    sample, k, total, diag = _subset_iteration(
        t, params, rng, eps_prime, lambda: advanced_sample_size(params.beta, params.delta, eps_prime, l)
    )
    diag["log_term_clamped"] = 2 * l - 4 < 1
    col = _Collector(caps)
    n_pools = min(total, caps.max_candidates)
    budget = _pool_budget(caps, n_pools, l)
    for idx, combo in enumerate(itertools.combinations(range(len(sample)), k)):
        if idx >= caps.max_candidates or (col.full and idx > 0):
            col.out.truncated = True
            break
        sub = sample.subset(combo)
        c = median34(sub, SeedParams(params.delta / 4, l, params.scale), child(rng, 1, idx), evaluator)
        delta_cost = evaluator.cost(sub, [c])
        radius, width = advanced_grid(params.delta, n, len(sample), delta_cost, eps_prime, l, d)
        col.add(c, SEED)
        centers = np.vstack([s.vertices for s in sub])
        if caps.restrict:
            pools = _RegionPools(_region(t, c, 1 + params.epsilon, params.beta, evaluator), centers, radius, width, caps, budget)
            _note(diag, pools)
            col.add_region(pools, 2 * l - 2)
        else:
            pool = _Pool(centers, radius, width, caps, budget)
            _note(diag, pool)
            col.add_grid(pool.points, 2 * l - 2)
        diag["subsets_processed"] = idx + 1
    out = col.out
    out.truncated = out.truncated or diag["grid_truncated"]
    out.diagnostics = diag
    return out


@dataclass
class Median5Result:
    curve: PolygonalCurve
    cost: float
    truncated: bool
    diagnostics: dict


def median5(
    t: CurveSet,
    delta: float,
    epsilon: float,
    l: int,
    scale: SampleScale = FAITHFUL,
    caps: EnumerationCaps = EnumerationCaps(),
    rng: np.random.Generator | None = None,
    evaluator: CostEvaluator | None = None,
) -> Median5Result:
    """(5+eps)-approximate (1,l)-median with at most 2l-2 vertices.

    If the caps stop the enumeration before any grid curve is produced, the
    seed median is returned instead and the result is marked truncated.
    """
    _check(t)
    if not 0 < delta < 1 or not 0 < epsilon < 1:
        raise ParameterError("delta and epsilon must lie in (0, 1)")
    if l < 2:
        raise ParameterError(f"l must be >= 2, got {l}")
    rng = rng if rng is not None else np.random.default_rng()
    evaluator = evaluator or CostEvaluator()
    n, d = len(t), t.dim
    seed = median34(t, SeedParams(delta / 2, l, scale), child(rng, 0), evaluator)
    seed_cost = evaluator.cost(t, [seed])
    cost_est = seed_cost / 34
    eps_prime = epsilon / 9
    s_size, w_size = median5_sample_sizes(delta, eps_prime)
    s = sample_uniform(t, scaled(s_size, scale), child(rng, 1))
    w = sample_uniform(t, scaled(w_size, scale), child(rng, 2))
    c = s[evaluator.argmin(list(s), list(w))[0]]
    radius, width = median5_grid(cost_est, eps_prime, n, d)
    budget = _pool_budget(caps, 1, l)
    if caps.restrict:
        pool = _RegionPools(_region(t, seed, 5 + epsilon, 1.0, evaluator), c.vertices, radius, width, caps, budget)
        it = iter_region_curves(pool.start, pool.inner, pool.end, 2 * l - 2)
        n_points = len(pool.start) + len(pool.inner) + len(pool.end)
    else:
        pool = _Pool(c.vertices, radius, width, caps, budget)
        it = iter_curves(pool.points, 2 * l - 2) if len(pool.points) else iter(())
        n_points = len(pool.points)
    candidates = list(itertools.islice(it, caps.max_candidates + 1))
    truncated = len(candidates) > caps.max_candidates or pool.truncated or n_points == 0
    candidates = candidates[: caps.max_candidates]
    diag = {
        "seed_cost": seed_cost,
        "sample_size": len(s),
        "eval_sample_size": len(w),
        "ball_radius": radius,
        "cell_width": pool.width,
        "pool_points": int(n_points),
        "candidates": len(candidates),
        "coarsened": pool.coarsened,
        "truncated": truncated,
        "fallback_to_seed": not candidates,
    }
    if not candidates:
        return Median5Result(seed, seed_cost, True, diag)
    i, best = evaluator.argmin(candidates, list(t))
    return Median5Result(candidates[i], best, truncated, diag)
