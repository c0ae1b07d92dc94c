"""(k,l)-median clustering of polygonal curves under the continuous Fréchet distance."""

from .candidates import (
    CandidateParams,
    CandidateSet,
    EnumerationCaps,
    candidates_advanced,
    candidates_simple,
    enumerate_curves,
    median5,
)
from .cost import CostEvaluator, cost
from .errors import KLMedianError, ParameterError, ResourceError
from .frechet import FrechetConfig, decide_frechet, frechet_distance
from .geometry import Ball, CurveSet, PolygonalCurve, cover_ball, grid_snap, normalize_curve
from .kmedian import ClusteringParams, ClusteringResult, cluster, kmedian, prune_partition
from .median_seed import SampleScale, SeedParams, best_by_sample, median34, sample_uniform
from .simplify import SimplificationResult, simplify

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "CandidateParams",
    "CandidateSet",
    "ClusteringParams",
    "ClusteringResult",
    "CostEvaluator",
    "CurveSet",
    "EnumerationCaps",
    "FrechetConfig",
    "KLMedianError",
    "ParameterError",
    "PolygonalCurve",
    "ResourceError",
    "SampleScale",
    "SeedParams",
    "SimplificationResult",
    "best_by_sample",
    "candidates_advanced",
    "candidates_simple",
    "cluster",
    "cost",
    "cover_ball",
    "decide_frechet",
    "enumerate_curves",
    "frechet_distance",
    "grid_snap",
    "kmedian",
    "median34",
    "median5",
    "normalize_curve",
    "prune_partition",
    "sample_uniform",
    "simplify",
]
