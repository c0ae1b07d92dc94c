"""Oracle-backed self checks, exposed by ``klmedian verify``."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .candidates import CandidateParams, EnumerationCaps, candidates_advanced, candidates_simple
from .cost import CostEvaluator
from .frechet import frechet_distance
from .geometry import CurveSet, PolygonalCurve
from .median_seed import SampleScale
from .oracle import GridSearchSpec, brute_force_median, densify, discrete_frechet, simple_shortcut
from .rng import child, make_rng
from .simplify import simplify

__all__ = ["CheckResult", "SUITES", "random_curve", "run_suite", "vertex_restricted_optimum"]


@dataclass
class CheckResult:
    name: str
    passed: int
    total: int
    required_fraction: float = 1.0

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed >= math.ceil(self.required_fraction * self.total)


def random_curve(rng: np.random.Generator, m: int, d: int = 2, extent: float = 1.0) -> PolygonalCurve:
    return PolygonalCurve(rng.uniform(0, extent, size=(m, d)))


def vertex_restricted_optimum(t: PolygonalCurve, l: int) -> float:
    """Least Fréchet error over all subsequences of at most ``l`` vertices keeping both ends."""
    m = len(t)
    if m <= l:
        return 0.0
    best = math.inf
    inner = range(1, m - 1)
    for k in range(0, l - 1):
        for mid in itertools.combinations(inner, k):
            idx = [0, *mid, m - 1]
            best = min(best, frechet_distance(t, t.vertices[idx]))
    return best


def check_sandwich(rng, count: int = 50, h: float = 0.01, tol: float = 1e-6) -> CheckResult:
    ok = 0
    for i in range(count):
        r = child(rng, i)
        a = random_curve(r, int(r.integers(2, 11)))
        b = random_curve(r, int(r.integers(2, 11)))
        df = frechet_distance(a, b)
        dd = discrete_frechet(densify(a, h), densify(b, h))
        ok += dd - h - tol <= df <= dd + tol
    return CheckResult("frechet-discrete-sandwich", ok, count)


def check_shortcut(rng, count: int = 50, tol: float = 1e-6) -> CheckResult:
    ok = 0
    for i in range(count):
        r = child(rng, i)
        sigma = random_curve(r, int(r.integers(2, 9)))
        tau = random_curve(r, int(r.integers(2, 9)))
        df = frechet_distance(sigma, tau)
        out = simple_shortcut(sigma, tau)
        in_balls = all(np.linalg.norm(tau.vertices - v, axis=1).min() <= df + tol for v in out.vertices)
        ok += len(out) <= 2 * len(sigma) - 2 and in_balls and frechet_distance(out, tau) <= df + tol
    return CheckResult("simple-shortcut", ok, count)


def check_simplify(rng, count: int = 30, l: int = 3, tol: float = 1e-6) -> CheckResult:
    ok = 0
    for i in range(count):
        r = child(rng, i)
        t = random_curve(r, int(r.integers(2, 9)))
        res = simplify(t, l)
        ok += len(res.curve) <= l and res.error <= 4 * vertex_restricted_optimum(t, l) + tol
    return CheckResult("simplify-4-approx", ok, count)


def tiny_instance(rng, n: int, m: int, d: int = 2) -> CurveSet:
    base = rng.uniform(0, 1, size=(m, d))
    return CurveSet.of(PolygonalCurve(base + rng.normal(0, 0.1, size=(m, d))) for _ in range(n))


def candidate_quality(t: CurveSet, generator: str, epsilon: float, rng, scale: float, caps: EnumerationCaps, resolution: float = 0.02):
    """``(best candidate cost, oracle cost, oracle additive error)`` on one instance."""
    gen = candidates_simple if generator == "simple" else candidates_advanced
    ev = CostEvaluator()
    cand = gen(t, CandidateParams(1.0, 0.5, epsilon, 2, SampleScale.test(scale), caps), rng, ev)
    _, best = ev.argmin(cand.curves, list(t))
    _, opt, add = brute_force_median(t, 2, GridSearchSpec.around(t, resolution))
    return best, opt, add


def check_candidates(rng, count: int = 3) -> CheckResult:
    caps = EnumerationCaps(10**6, 10**4, "coarsen")
    ok = 0
    for i in range(count):
        r = child(rng, i)
        t = tiny_instance(r, int(r.integers(3, 7)), int(r.integers(2, 4)))
        best, opt, add = candidate_quality(t, "simple", 0.5, child(r, 1), 0.02, caps)
        ok += best <= 3.5 * (opt + add)
    return CheckResult("candidates-simple-vs-grid-oracle", ok, count, 0.8)


SUITES: dict[str, Callable[..., CheckResult]] = {
    "sandwich": check_sandwich,
    "shortcut": check_shortcut,
    "simplify": check_simplify,
    "candidates": check_candidates,
}


def run_suite(seed: int, names=None) -> list[CheckResult]:
    rng = make_rng(seed)
    names = list(names or SUITES)
    return [SUITES[name](child(rng, k)) for k, name in enumerate(names)]
