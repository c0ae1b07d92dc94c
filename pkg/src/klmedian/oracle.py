"""Brute-force baselines and constructive checks.

These are deliberately simple and slow. They give independent reference
values for tests: discrete Fréchet distance, exhaustive grid medians and the
single-curve shortcutting construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .cost import CostEvaluator
from .errors import ParameterError, ResourceError
from .frechet import DEFAULT_CONFIG, _distance, frechet_distance, reachable_free_space, resolve_abs_tol
from .geometry import CurveSet, PolygonalCurve

__all__ = [
    "GridSearchSpec",
    "brute_force_median",
    "densify",
    "discrete_frechet",
    "simple_shortcut",
]


# -- discrete Fréchet -------------------------------------------------------


@njit(cache=True)
def _dfd(P, Q):
    p, q = P.shape[0], Q.shape[0]
    ca = np.empty((p, q))
    for i in range(p):
        for j in range(q):
            s = 0.0
            for k in range(P.shape[1]):
                u = P[i, k] - Q[j, k]
                s += u * u
            d = math.sqrt(s)
            if i == 0 and j == 0:
                ca[i, j] = d
            elif i == 0:
                ca[i, j] = max(ca[i, j - 1], d)
            elif j == 0:
                ca[i, j] = max(ca[i - 1, j], d)
            else:
                ca[i, j] = max(min(ca[i - 1, j], ca[i, j - 1], ca[i - 1, j - 1]), d)
    return ca[p - 1, q - 1]


def discrete_frechet(a, b) -> float:
    """Discrete Fréchet distance of the vertex sequences (Eiter-Mannila DP)."""
    P = np.asarray(a.vertices if isinstance(a, PolygonalCurve) else a, dtype=np.float64)
    Q = np.asarray(b.vertices if isinstance(b, PolygonalCurve) else b, dtype=np.float64)
    if P.ndim != 2 or Q.ndim != 2 or len(P) == 0 or len(Q) == 0:
        raise ParameterError("discrete Fréchet needs non-empty (m, d) vertex arrays")
    return float(_dfd(P, Q))


def densify(curve, h: float) -> np.ndarray:
    """Vertex array of ``curve`` with extra vertices so every edge has length <= h."""
    v = np.asarray(curve.vertices if isinstance(curve, PolygonalCurve) else curve, dtype=np.float64)
    out = [v[:1]]
    for a, b in zip(v[:-1], v[1:]):
        k = max(1, math.ceil(np.linalg.norm(b - a) / h))
        s = np.arange(1, k + 1)[:, None] / k
        out.append(a + s * (b - a))
    return np.vstack(out)


# -- brute-force grid median ------------------------------------------------


@dataclass(frozen=True)
class GridSearchSpec:
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    resolution: float
    max_vertices: int = 2
    max_evaluations: int = 5 * 10**7

    def __post_init__(self) -> None:
        if not self.resolution > 0:
            raise ParameterError("resolution must be positive")
        if len(self.lower) != len(self.upper) or any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ParameterError("invalid bounding box")
        if self.max_vertices < 1:
            raise ParameterError("max_vertices must be >= 1")

    @classmethod
    def around(cls, t: CurveSet, resolution: float, margin: float = 0.0, max_vertices: int = 2) -> GridSearchSpec:
        allv = np.vstack([c.vertices for c in t])
        return cls(
            tuple((allv.min(axis=0) - margin).tolist()),
            tuple((allv.max(axis=0) + margin).tolist()),
            resolution,
            max_vertices,
        )

    def points(self) -> np.ndarray:
        # lattice of multiples of the resolution covering the box
        r = self.resolution
        axes = [
            np.arange(math.floor(lo / r + 1e-9), math.ceil(hi / r - 1e-9) + 1) * r
            for lo, hi in zip(self.lower, self.upper)
        ]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))

    def additive_error(self, n: int) -> float:
        return n * math.sqrt(len(self.lower)) * self.resolution


@njit(cache=True)
def _segment_search(G, verts, offsets, order, lbs, best, abs_tol, rel_tol):
    """Scan (i, j) pairs in increasing lower-bound order; return the best pair."""
    n = offsets.shape[0] - 1
    g = G.shape[0]
    best_pair = -1
    seg = np.empty((2, G.shape[1]))
    for idx in range(order.shape[0]):
        code = order[idx]
        lb = lbs[code]
        if lb >= best:
            break
        i = code // g
        j = code % g
        if i == j:
            continue
        seg[0] = G[i]
        seg[1] = G[j]
        total = 0.0
        for c in range(n):
            total += _distance(seg, verts[offsets[c] : offsets[c + 1]], abs_tol, rel_tol)
            if total >= best:
                break
        if total < best:
            best = total
            best_pair = code
    return best_pair, best


def brute_force_median(t: CurveSet, l: int, spec: GridSearchSpec) -> tuple[PolygonalCurve, float, float]:
    """Best curve with at most ``l`` vertices on the search grid.

    Returns ``(curve, cost, additive_error)`` where ``additive_error`` is
    ``n * sqrt(d) * resolution``. Single points and segments are searched
    exhaustively with endpoint lower-bound pruning; longer curves by plain
    enumeration, which is only feasible for tiny grids.
    """
    if len(t) == 0:
        raise ParameterError("brute-force median needs a non-empty curve set")
    l = min(l, spec.max_vertices)
    G = spec.points()
    g = len(G)
    curves = list(t)
    verts = np.vstack([c.vertices for c in curves])
    offsets = np.concatenate([[0], np.cumsum([len(c) for c in curves])]).astype(np.int64)
    abs_tol = resolve_abs_tol(verts, G, DEFAULT_CONFIG)

    # single-vertex curves: distance is the farthest vertex
    far = np.zeros(g)
    for c in curves:
        far += np.linalg.norm(G[:, None, :] - c.vertices[None], axis=2).max(axis=1)
    bi = int(np.argmin(far))
    best_curve, best = PolygonalCurve(G[bi]), float(far[bi])
    if l == 1:
        return best_curve, best, spec.additive_error(len(t))

    if g * g > spec.max_evaluations:
        raise ResourceError(f"grid of {g} points gives {g * g} segments (cap {spec.max_evaluations})")
    ts = np.array([c.start for c in curves])
    te = np.array([c.end for c in curves])
    ds = np.linalg.norm(G[:, None, :] - ts[None], axis=2)
    de = np.linalg.norm(G[:, None, :] - te[None], axis=2)
    lbs = np.zeros(g * g)
    rows = max(1, (1 << 22) // (g * len(curves)))
    for lo in range(0, g, rows):
        blk = np.maximum(ds[lo : lo + rows, None, :], de[None, :, :]).sum(axis=2)
        lbs[lo * g : (lo + blk.shape[0]) * g] = blk.reshape(-1)
    order = np.argsort(lbs, kind="stable")
    pair, cost2 = _segment_search(G, verts, offsets, order, lbs, best, abs_tol, DEFAULT_CONFIG.rel_tol)
    if pair >= 0:
        best_curve, best = PolygonalCurve(G[[pair // g, pair % g]]), float(cost2)

    if l >= 3:
        count = sum(g * (g - 1) ** (k - 1) for k in range(3, l + 1))
        if count > spec.max_evaluations:
            raise ResourceError(f"{count} curves with up to {l} vertices exceed cap {spec.max_evaluations}")
        ev = CostEvaluator(cache=False)
        for k in range(3, l + 1):
            for seq in itertools.product(range(g), repeat=k):
                if any(a == b for a, b in zip(seq, seq[1:])):
                    continue
                cand = PolygonalCurve(G[list(seq)])
                c = ev.cost(curves, [cand])
                if c < best:
                    best_curve, best = cand, c
    return best_curve, best, spec.additive_error(len(t))


# -- single-curve shortcutting ----------------------------------------------


def _matched_edge(sigma: np.ndarray, tau: np.ndarray, i: int, r: float) -> int:
    """Edge of ``tau`` matched to vertex ``i`` of ``sigma`` by some feasible path at radius r."""
    LR, _ = reachable_free_space(sigma, tau, r)
    LRb, _ = reachable_free_space(sigma[::-1], tau[::-1], r)
    p, q = len(sigma), len(tau)
    for j in range(q - 1):
        f_lo, f_hi = LR[i, j]
        b_lo, b_hi = LRb[p - 1 - i, q - 2 - j]
        lo = max(f_lo, 1.0 - b_hi)
        hi = min(f_hi, 1.0 - b_lo)
        if f_lo <= f_hi and b_lo <= b_hi and lo <= hi:
            # a parameter at the edge's end would be tau's next vertex
            if lo >= 1.0:
                continue
            return j
    raise RuntimeError("no feasible matching through the vertex; radius below the Fréchet distance")


def _ball_interval(a: np.ndarray, b: np.ndarray, c: np.ndarray, r: float) -> tuple[float, float] | None:
    u = b - a
    w = a - c
    A = float(u @ u)
    B = 2.0 * float(u @ w)
    C = float(w @ w) - r * r
    if A == 0.0:
        return (0.0, 1.0) if C <= 0 else None
    disc = B * B - 4 * A * C
    if disc < 0:
        return None
    sq = math.sqrt(disc)
    lo, hi = max(0.0, (-B - sq) / (2 * A)), min(1.0, (-B + sq) / (2 * A))
    return (lo, hi) if lo <= hi else None


def simple_shortcut(sigma, tau, tol: float = 1e-7) -> PolygonalCurve:
    """Shortcut ``sigma`` until every vertex lies in a ball around a vertex of ``tau``.

    The balls have radius ``r = d_F(sigma, tau) + tol``. A vertex outside all
    balls is matched (via a feasible free-space path) into some edge
    ``(tau_j, tau_{j+1})`` and replaced by the last point before it inside
    ``B(tau_j, r)`` and the first point after it inside ``B(tau_{j+1}, r)``.
    The result has at most ``2|sigma| - 2`` vertices and distance at most r
    to ``tau``.
    """
    s = np.array(sigma.vertices if isinstance(sigma, PolygonalCurve) else sigma, dtype=np.float64)
    tv = np.array(tau.vertices if isinstance(tau, PolygonalCurve) else tau, dtype=np.float64)
    if len(s) == 0 or len(tv) == 0:
        raise ParameterError("curves must be non-empty")
    r = frechet_distance(s, tv) + tol
    inside_tol = 1e-9 * max(1.0, r)

    def outside(v: np.ndarray) -> bool:
        return float(np.linalg.norm(tv - v, axis=1).min()) > r + inside_tol

    if len(tv) < 2:
        return PolygonalCurve(s)
    while True:
        bad = [i for i in range(1, len(s) - 1) if outside(s[i])]
        if not bad:
            return PolygonalCurve(s)
        i = bad[0]
        j = _matched_edge(s, tv, i, r + inside_tol)
        t_minus = None
        for e in range(i - 1, -1, -1):
            iv = _ball_interval(s[e], s[e + 1], tv[j], r)
            if iv is not None:
                t_minus = (e, iv[1])
                break
        t_plus = None
        for e in range(i, len(s) - 1):
            iv = _ball_interval(s[e], s[e + 1], tv[j + 1], r)
            if iv is not None:
                t_plus = (e, iv[0])
                break
        if t_minus is None or t_plus is None:
            raise RuntimeError("shortcut endpoints not found; inconsistent matching")
        e1, u1 = t_minus
        e2, u2 = t_plus
        p1 = s[e1] + u1 * (s[e1 + 1] - s[e1])
        p2 = s[e2] + u2 * (s[e2 + 1] - s[e2])
        new = list(s[: e1 + 1]) + [p1, p2] + list(s[e2 + 1 :])
        dedup = [new[0]]
        for v in new[1:]:
            if not np.array_equal(v, dedup[-1]):
                dedup.append(v)
        s = np.array(dedup)
