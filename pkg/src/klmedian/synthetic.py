"""Planted-cluster instances with a certified cost upper bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .geometry import CurveSet, PolygonalCurve

__all__ = ["PlantedInstance", "planted_instance"]


@dataclass(frozen=True)
class PlantedInstance:
    """Curves, their base curves and labels, and an upper bound on cost(curves, bases)."""

    curves: CurveSet
    bases: list[PolygonalCurve]
    labels: list[int]
    bound: float


def _ball_offsets(rng: np.random.Generator, count: int, d: int, radius: float) -> np.ndarray:
    direction = rng.normal(size=(count, d))
    direction /= np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-300)
    return direction * radius * rng.random((count, 1)) ** (1.0 / d)


def planted_instance(
    k: int,
    n: int,
    m: int,
    d: int,
    radius: float,
    rng: np.random.Generator,
    *,
    noise: str = "box",
    extent: float = 10.0,
    bases: list[PolygonalCurve] | None = None,
) -> PlantedInstance:
    """Perturb the vertices of ``k`` base curves to get ``n`` curves.

    ``noise="box"`` moves each coordinate uniformly in [-radius, radius]
    (bound ``n * radius * sqrt(d)``); ``noise="ball"`` moves each vertex
    uniformly inside the ball of that radius (bound ``n * radius``). Moving
    each vertex by at most r moves the curve by at most r in Fréchet distance.
    Curves are assigned to bases round-robin.
    """
    if k < 1 or n < 1 or m < 1 or d < 1 or radius < 0:
        raise ParameterError("planted instance needs k, n, m, d >= 1 and radius >= 0")
    if noise not in ("box", "ball"):
        raise ParameterError(f"unknown noise model {noise!r}")
    if bases is None:
        bases = [PolygonalCurve(rng.uniform(0, extent, size=(m, d))) for _ in range(k)]
    curves, labels = [], []
    for i in range(n):
        b = bases[i % k]
        if noise == "box":
            off = rng.uniform(-radius, radius, size=b.vertices.shape)
        else:
            off = _ball_offsets(rng, len(b), d, radius)
        curves.append(PolygonalCurve(b.vertices + off))
        labels.append(i % k)
    per_curve = radius * (math.sqrt(d) if noise == "box" else 1.0)
    return PlantedInstance(CurveSet.of(curves), list(bases), labels, n * per_curve)
