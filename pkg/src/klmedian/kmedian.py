"""Recursive approximation scheme for k-median with a pluggable candidate finder.

``kmedian`` alternates a pruning phase, which discards the half of the input
closest to the centers found so far, and a candidate phase, which asks the
plugin for 1-median candidates and recurses once per candidate. The best
center set found anywhere in the recursion tree wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .candidates import (
    ADVANCED_MAX_EPSILON,
    CandidateParams,
    CandidateSet,
    EnumerationCaps,
    candidates_advanced,
    candidates_simple,
)
from .cost import CostEvaluator, cost
from .errors import ParameterError
from .frechet import DEFAULT_CONFIG, FrechetConfig
from .geometry import CurveSet, PolygonalCurve
from .median_seed import FAITHFUL, SampleScale
from .rng import child, make_rng

__all__ = [
    "CandidatePlugin",
    "ClusteringParams",
    "ClusteringResult",
    "SampleScale",
    "cluster",
    "cluster_beta",
    "cost",
    "kmedian",
    "prune_partition",
]


class CandidatePlugin(Protocol):
    def __call__(
        self, t: CurveSet, beta: float, delta: float, epsilon: float, rng: np.random.Generator
    ) -> CandidateSet | Sequence[PolygonalCurve]: ...


def prune_partition(
    t: CurveSet, centers: Sequence[PolygonalCurve], evaluator: CostEvaluator | None = None
) -> tuple[CurveSet, CurveSet]:
    """Split ``t`` into ``(kept, removed)``; ``removed`` holds the ``floor(|t|/2)`` curves closest to ``centers``.

    Ties are broken by ascending curve id. Both parts preserve input order.
    """
    if not centers:
        raise ParameterError("pruning needs at least one center")
    evaluator = evaluator or CostEvaluator()
    n = len(t)
    if n == 0:
        return t, t
    dmin = evaluator.distance_matrix(list(t), list(centers)).min(axis=1)
    order = np.lexsort((np.asarray(t.ids), dmin))
    removed = set(order[: n // 2].tolist())
    kept_idx = [i for i in range(n) if i not in removed]
    removed_idx = [i for i in range(n) if i in removed]
    return t.subset(kept_idx), t.subset(removed_idx)


@dataclass
class _Stats:
    calls: int = 0
    plugin_calls: int = 0
    max_prune_depth: int = 0
    candidate_sets: int = 0
    truncated: bool = False
    raw_input_centers: bool = False
    evaluated: list | None = None


def _candidate_curves(result) -> tuple[list[PolygonalCurve], bool]:
    if isinstance(result, CandidateSet):
        return list(result.curves), result.truncated
    return list(result), False


def kmedian(
    t: CurveSet,
    c: Sequence[PolygonalCurve],
    kappa: int,
    beta: float,
    delta: float,
    epsilon: float,
    plugin: CandidatePlugin,
    rng: np.random.Generator,
    k: int | None = None,
    evaluator: CostEvaluator | None = None,
    stats: _Stats | None = None,
) -> list[PolygonalCurve]:
    """Find ``kappa`` more centers to add to ``c``.

    ``k`` is the total number of centers (``len(c) + kappa`` on the first
    call) and splits the failure probability across plugin calls as
    ``delta / k``. The plugin receives ``(t, beta, delta / k, epsilon, rng)``
    and returns a CandidateSet or a plain sequence of curves.
    """
    if kappa < 0:
        raise ParameterError("kappa must be >= 0")
    k = k if k is not None else len(c) + kappa
    evaluator = evaluator or CostEvaluator()
    stats = stats if stats is not None else _Stats()
    return _kmedian(t, list(c), kappa, beta, delta, epsilon, plugin, rng, k, evaluator, stats, 0)


def _kmedian(t, c, kappa, beta, delta, epsilon, plugin, rng, k, ev, stats, prune_depth):
    stats.calls += 1
    stats.max_prune_depth = max(stats.max_prune_depth, prune_depth)
    if kappa == 0:
        return c
    if kappa >= len(t):
        stats.raw_input_centers = stats.raw_input_centers or len(t) > 0
        return c + list(t)
    options: list[list[PolygonalCurve]] = []
    if c:
        kept, _ = prune_partition(t, c, ev)
        options.append(_kmedian(kept, c, kappa, beta, delta, epsilon, plugin, child(rng, 0), k, ev, stats, prune_depth + 1))
    stats.plugin_calls += 1
    found, truncated = _candidate_curves(plugin(t, beta, delta / k, epsilon, child(rng, 1)))
    stats.truncated |= truncated
    for i, cand in enumerate(found):
        options.append(_kmedian(t, c + [cand], kappa - 1, beta, delta, epsilon, plugin, child(rng, 2, i), k, ev, stats, 0))
    if not options:
        return c
    # options[0] is the pruning branch when present; ties go to the earliest option
    costs = [ev.cost(t, opt) for opt in options]
    stats.candidate_sets += len(options)
    if stats.evaluated is not None:
        stats.evaluated.extend(zip(costs, options))
    return options[int(np.argmin(costs))]


# -- top-level entry --------------------------------------------------------


@dataclass(frozen=True)
class ClusteringParams:
    k: int
    l: int
    delta: float = 0.1
    epsilon: float = 0.1
    seed: int = 0
    scale: SampleScale = FAITHFUL
    caps: EnumerationCaps = field(default_factory=EnumerationCaps)
    frechet: FrechetConfig = DEFAULT_CONFIG
    threads: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if self.l < 2:
            raise ParameterError("l must be >= 2")
        if not 0 < self.delta < 1:
            raise ParameterError("delta must lie in (0, 1)")
        if not 0 < self.epsilon < 1:
            raise ParameterError("epsilon must lie in (0, 1)")


@dataclass
class ClusteringResult:
    centers: list[PolygonalCurve]
    assignment: list[int]
    total_cost: float
    diagnostics: dict = field(default_factory=dict)

    def cluster_costs(self, t: CurveSet, evaluator: CostEvaluator | None = None) -> list[float]:
        evaluator = evaluator or CostEvaluator()
        out = [0.0] * len(self.centers)
        for curve, a in zip(t, self.assignment):
            out[a] += evaluator.dist(curve, self.centers[a])
        return out


def cluster_beta(k: int, epsilon: float, algorithm: str) -> tuple[float, float]:
    """``(beta, plugin epsilon)`` used by ``cluster`` for the given target epsilon."""
    if algorithm == "simple":
        return 20 * k * k / epsilon + 2 * k, epsilon / 5
    if algorithm == "advanced":
        return 12 * k * k / epsilon + 2 * k, epsilon / 3
    raise ParameterError(f"unknown algorithm {algorithm!r}")


def assign(t: CurveSet, centers: Sequence[PolygonalCurve], evaluator: CostEvaluator) -> tuple[list[int], float]:
    dm = evaluator.distance_matrix(list(t), list(centers))
    idx = dm.argmin(axis=1)
    return idx.tolist(), float(dm[np.arange(len(t)), idx].sum())


def cluster(
    t: CurveSet,
    params: ClusteringParams,
    algorithm: str = "simple",
    rng: np.random.Generator | None = None,
    evaluator: CostEvaluator | None = None,
) -> ClusteringResult:
    """(k,l)-median clustering targeting factor 3+eps (simple) or 1+eps (advanced)."""
    if len(t) == 0:
        raise ParameterError("cannot cluster an empty curve set")
    beta, plugin_eps = cluster_beta(params.k, params.epsilon, algorithm)
    if not beta > 2 * params.k:
        raise ParameterError(f"beta={beta} must exceed 2k={2 * params.k}")
    if algorithm == "advanced" and plugin_eps > ADVANCED_MAX_EPSILON:
        raise ParameterError(f"advanced shortcutting needs epsilon/3 <= {ADVANCED_MAX_EPSILON}")
    rng = rng if rng is not None else make_rng(params.seed)
    own = evaluator is None
    evaluator = evaluator or CostEvaluator(params.frechet, params.threads)
    generate = candidates_simple if algorithm == "simple" else candidates_advanced
    plugin_diags: list[dict] = []

    def plugin(sub, b, dl, eps, r):
        cand = generate(sub, CandidateParams(b, dl, eps, params.l, params.scale, params.caps), r, evaluator)
        plugin_diags.append(cand.diagnostics)
        return cand

    stats = _Stats()
    try:
        centers = kmedian(t, [], params.k, beta, params.delta, plugin_eps, plugin, rng, params.k, evaluator, stats)
        assignment, total = assign(t, centers, evaluator)
    finally:
        if own:
            evaluator.close()
    max_vertices = 2 * params.l - 2
    diagnostics = {
        "algorithm": algorithm,
        "beta": beta,
        "plugin_epsilon": plugin_eps,
        "recursive_calls": stats.calls,
        "plugin_calls": stats.plugin_calls,
        "max_prune_depth": stats.max_prune_depth,
        "candidate_sets_evaluated": stats.candidate_sets,
        "truncated": stats.truncated,
        "coarsened": any(d.get("coarsened") for d in plugin_diags),
        "raw_input_centers": stats.raw_input_centers,
        "oversized_centers": sum(len(c) > max_vertices for c in centers),
        "max_subsets_per_call": max((d["subsets_processed"] for d in plugin_diags), default=0),
        "scale": {"factor": params.scale.factor, "mode": params.scale.mode},
        "seed": params.seed,
        "frechet_tolerance": {"abs_tol": params.frechet.abs_tol, "rel_tol": params.frechet.rel_tol},
    }
    return ClusteringResult(list(centers), assignment, total, diagnostics)
