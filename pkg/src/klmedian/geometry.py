"""Points, polygonal curves, balls and grid covers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParameterError, ResourceError

__all__ = [
    "Ball",
    "CurveSet",
    "PolygonalCurve",
    "DEFAULT_MAX_CELLS",
    "as_point",
    "cover_ball",
    "grid_snap",
    "normalize_curve",
]

DEFAULT_MAX_CELLS = 10**7

# Relative tolerance for the collinearity test in normalize_curve.
_COLLINEAR_RTOL = 1e-12


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ParameterError("points must have at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"point has non-finite coordinates: {arr!r}")
    return arr


class PolygonalCurve:
    """An immutable polygonal curve given by its vertex sequence.

    Vertices are stored as a read-only ``(m, d)`` float64 array. Two curves
    compare equal iff their vertex arrays are identical; Fréchet-equivalent
    curves with different vertex lists are distinct objects.
    """

    __slots__ = ("_v", "_key")

    def __init__(self, vertices) -> None:
        v = np.array(vertices, dtype=np.float64, copy=True)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise ParameterError("a curve needs at least one vertex of dimension >= 1")
        if not np.all(np.isfinite(v)):
            raise ParameterError("curve has non-finite coordinates")
        v.setflags(write=False)
        self._v = v
        self._key = None

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def dim(self) -> int:
        return self._v.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self._v[0]

    @property
    def end(self) -> np.ndarray:
        return self._v[-1]

    def key(self) -> bytes:
        """Hashable identity of the vertex sequence (shape-prefixed bytes)."""
        if self._key is None:
            self._key = bytes(str(self._v.shape), "ascii") + self._v.tobytes()
        return self._key

    def reversed(self) -> PolygonalCurve:
        return PolygonalCurve(self._v[::-1])

    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self._v, axis=0), axis=1)

    def point_at(self, edge: int, t: float) -> np.ndarray:
        """Point at local parameter ``t`` in [0, 1] of edge ``edge``."""
        a = self._v[edge]
        b = self._v[min(edge + 1, len(self) - 1)]
        return a + t * (b - a)

    def tolist(self) -> list[list[float]]:
        return self._v.tolist()

    def __len__(self) -> int:
        return self._v.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self._v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolygonalCurve):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"PolygonalCurve({self._v.tolist()!r})"


@dataclass(frozen=True)
class CurveSet:
    """Ordered multiset of curves sharing one ambient dimension.

    ``ids`` are stable integer identifiers; they default to positions.
    Duplicates are allowed since samples are drawn with replacement.
    """

    curves: tuple[PolygonalCurve, ...]
    ids: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        curves = tuple(c if isinstance(c, PolygonalCurve) else PolygonalCurve(c) for c in self.curves)
        object.__setattr__(self, "curves", curves)
        ids = tuple(self.ids) if self.ids else tuple(range(len(curves)))
        if len(ids) != len(curves):
            raise ParameterError("ids and curves differ in length")
        object.__setattr__(self, "ids", ids)
        dims = {c.dim for c in curves}
        if len(dims) > 1:
            raise ParameterError(f"curves of mixed dimension {sorted(dims)}")

    @classmethod
    def of(cls, curves: Iterable, ids: Sequence[int] | None = None) -> CurveSet:
        return cls(tuple(curves), tuple(ids) if ids is not None else ())

    @property
    def dim(self) -> int:
        if not self.curves:
            raise ParameterError("empty curve set has no dimension")
        return self.curves[0].dim

    def subset(self, indices: Iterable[int]) -> CurveSet:
        idx = list(indices)
        return CurveSet(tuple(self.curves[i] for i in idx), tuple(self.ids[i] for i in idx))

    def max_complexity(self) -> int:
        return max((len(c) for c in self.curves), default=0)

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self) -> Iterator[PolygonalCurve]:
        return iter(self.curves)

    def __getitem__(self, i: int) -> PolygonalCurve:
        return self.curves[i]


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise ParameterError(f"ball radius must be finite and >= 0, got {self.radius}")

    def contains(self, p, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(as_point(p) - self.center)) <= self.radius + tol


def grid_snap(p, r: float) -> np.ndarray:
    """Return the ``r``-grid-point of ``p``: coordinatewise ``floor(p/r)*r``."""
    if not r > 0:
        raise ParameterError(f"grid cell width must be positive, got {r}")
    return np.floor(as_point(p) / r) * r


def cover_ball(ball: Ball, cell_width: float, max_cells: int = DEFAULT_MAX_CELLS) -> np.ndarray:
    """Grid points of all cells of width ``cell_width`` that intersect ``ball``.

    Returns an ``(N, d)`` array in lexicographic order of cell index. A cell
    ``[g, g + w)^d`` meets the closed ball iff its closest point to the center
    lies within the radius. Raises ResourceError if the bounding box of
    candidate cells holds more than ``max_cells`` cells.
    """
    if not cell_width > 0:
        raise ParameterError(f"grid cell width must be positive, got {cell_width}")
    c = ball.center
    w = float(cell_width)
    # closed cells: a ball reaching exactly k*w also touches cell k-1
    lo = (np.ceil((c - ball.radius) / w) - 1).astype(np.int64)
    hi = np.floor((c + ball.radius) / w).astype(np.int64)
    counts = hi - lo + 1
    total = math.prod(int(x) for x in counts)
    if total > max_cells:
        raise ResourceError(f"grid cover needs {total} cells (cap {max_cells})")
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    idx = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(c))
    corner = idx * w
    nearest = np.clip(c, corner, corner + w)
    keep = np.linalg.norm(nearest - c, axis=1) <= ball.radius
    return corner[keep]


def _collinear_between(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> bool:
    # b lies on the segment a-c (so dropping it keeps the traced point set)
    ac = c - a
    ab = b - a
    n2 = float(ac @ ac)
    if n2 == 0.0:
        return False
    t = float(ab @ ac) / n2
    if t < 0.0 or t > 1.0:
        return False
    resid = ab - t * ac
    scale = max(float(np.abs(ac).max()), float(np.abs(ab).max()))
    return float(np.abs(resid).max()) <= _COLLINEAR_RTOL * scale


def normalize_curve(vertices) -> PolygonalCurve:
    """Drop repeated vertices and interior vertices lying on their neighbours' segment.

    Only vertices strictly between their neighbours are removed, so the traced
    path (and hence the Fréchet class) is unchanged. A vertex where the curve
    doubles back on a line is kept.
    """
    if isinstance(vertices, PolygonalCurve):
        v = vertices.vertices
    else:
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim == 1:
            v = v.reshape(1, -1) if v.size else v.reshape(0, 0)
    if v.shape[0] == 0:
        raise ParameterError("cannot normalize an empty vertex list")
    out: list[np.ndarray] = [v[0]]
    for p in v[1:]:
        if np.array_equal(p, out[-1]):
            continue
        while len(out) >= 2 and _collinear_between(out[-2], out[-1], p):
            out.pop()
        out.append(p)
    return PolygonalCurve(np.array(out))
