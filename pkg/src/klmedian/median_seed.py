"""34-approximate (1,l)-median: sample, simplify, pick the best on a second sample."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cost import CostEvaluator
from .errors import ParameterError
from .geometry import CurveSet, PolygonalCurve
from .simplify import simplify

__all__ = [
    "SampleScale",
    "SeedParams",
    "best_by_sample",
    "median34",
    "median34_sample_sizes",
    "sample_uniform",
    "scaled",
]


@dataclass(frozen=True)
class SampleScale:
    """Multiplier applied to every sample-size formula.

    ``faithful`` requires ``factor == 1``. In ``test`` mode the scaled size is
    ``max(1, ceil(factor * size))``.
    """

    factor: float = 1.0
    mode: str = "faithful"

    def __post_init__(self) -> None:
        if self.mode not in ("faithful", "test"):
            raise ParameterError(f"unknown scale mode {self.mode!r}")
        if not self.factor > 0:
            raise ParameterError("scale factor must be positive")
        if self.mode == "faithful" and self.factor != 1.0:
            raise ParameterError("faithful mode requires factor == 1.0")

    @classmethod
    def test(cls, factor: float) -> SampleScale:
        return cls(factor, "test")


FAITHFUL = SampleScale()


def scaled(size: int, scale: SampleScale) -> int:
    if scale.factor == 1.0:
        return max(1, int(size))
    return max(1, math.ceil(scale.factor * size))


def median34_sample_sizes(delta: float) -> tuple[int, int]:
    """Unscaled sizes of the candidate sample S and the evaluation sample W."""
    s = math.ceil(2 * (math.log(2) - math.log(delta)))
    w = math.ceil(-64 * (math.log(delta) - math.log(math.ceil(4 * math.log(2) - math.log(delta)))))
    return s, w


@dataclass(frozen=True)
class SeedParams:
    delta: float
    l: int
    scale: SampleScale = field(default=FAITHFUL)

    def __post_init__(self) -> None:
        if not 0 < self.delta < 1:
            raise ParameterError(f"delta must lie in (0, 1), got {self.delta}")
        if self.l < 2:
            raise ParameterError(f"l must be >= 2, got {self.l}")


def sample_uniform(t: CurveSet, count: int, rng: np.random.Generator) -> CurveSet:
    """``count`` i.i.d. uniform draws from ``t`` with replacement."""
    if len(t) == 0:
        raise ParameterError("cannot sample from an empty curve set")
    if count < 1:
        raise ParameterError("sample size must be >= 1")
    return t.subset(rng.integers(0, len(t), size=count).tolist())


def best_by_sample(candidates, w, evaluator: CostEvaluator | None = None) -> PolygonalCurve:
    """Candidate minimising the summed distance to the sample ``w``; ties to the first."""
    candidates = list(candidates)
    evaluator = evaluator or CostEvaluator()
    i, _ = evaluator.argmin(candidates, list(w))
    return candidates[i]


def median34(
    t: CurveSet,
    params: SeedParams,
    rng: np.random.Generator,
    evaluator: CostEvaluator | None = None,
) -> PolygonalCurve:
    """Approximate (1,l)-median with at most ``l`` vertices.

    With probability at least ``1 - delta`` its cost is within a factor 34 of
    the optimum (at faithful sample sizes).
    """
    if len(t) == 0:
        raise ParameterError("median34 needs a non-empty curve set")
    evaluator = evaluator or CostEvaluator()
    s_size, w_size = median34_sample_sizes(params.delta)
    s = sample_uniform(t, scaled(s_size, params.scale), rng)
    simplified: dict[bytes, PolygonalCurve] = {}
    candidates = []
    for curve in s:
        key = curve.key()
        if key not in simplified:
            simplified[key] = simplify(curve, params.l, evaluator.cfg).curve
        candidates.append(simplified[key])
    w = sample_uniform(t, scaled(w_size, params.scale), rng)
    return best_by_sample(candidates, w, evaluator)
