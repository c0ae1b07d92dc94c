"""The brute-force baselines, checked against even simpler enumerations."""

import functools
import math

import numpy as np
import pytest
from hypothesis import given

from klmedian.frechet import frechet_distance
from klmedian.geometry import CurveSet, PolygonalCurve
from klmedian.oracle import GridSearchSpec, brute_force_median, densify, discrete_frechet, simple_shortcut

from conftest import curves


def coupling_oracle(a, b):
    """Min over all monotone couplings of the max paired distance."""
    P, Q = a.vertices, b.vertices

    @functools.lru_cache(maxsize=None)
    def paths(i, j):
        if (i, j) == (len(P) - 1, len(Q) - 1):
            return [[(i, j)]]
        out = []
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            if i + di < len(P) and j + dj < len(Q):
                out += [[(i, j)] + p for p in paths(i + di, j + dj)]
        return out

    return min(max(np.linalg.norm(P[i] - Q[j]) for i, j in path) for path in paths(0, 0))


class TestDiscreteFrechet:
    def test_identical(self):
        a = PolygonalCurve([[0, 0], [1, 1], [3, 0]])
        assert discrete_frechet(a, a) == 0

    def test_parallel_segments(self):
        assert discrete_frechet([[0, 0], [1, 0]], [[0, 1], [1, 1]]) == 1

    @given(curves(max_vertices=4), curves(max_vertices=4))
    def test_matches_coupling_enumeration(self, a, b):
        assert math.isclose(discrete_frechet(a, b), coupling_oracle(a, b), rel_tol=1e-12, abs_tol=1e-12)


def test_densify_edge_lengths():
    v = densify(PolygonalCurve([[0, 0], [1, 0], [1, 0.35]]), 0.1)
    assert np.linalg.norm(np.diff(v, axis=0), axis=1).max() <= 0.1 + 1e-12
    assert v[0].tolist() == [0, 0] and v[-1].tolist() == [1, 0.35]
    assert len(v) == 1 + 10 + 4


class TestBruteForceMedian:
    def test_single_on_grid_curve(self):
        s = PolygonalCurve([[0, 0], [1, 0.5]])
        curve, cost, add = brute_force_median(CurveSet.of([s]), 2, GridSearchSpec.around(CurveSet.of([s]), 0.25))
        assert curve == s and cost <= 1e-9
        assert math.isclose(add, math.sqrt(2) * 0.25)

    def test_parallel_segments(self):
        t = CurveSet.of([[[0, 0], [1, 0]], [[0, 1], [1, 1]]])
        curve, cost, _ = brute_force_median(t, 2, GridSearchSpec.around(t, 0.25))
        # the midline at 0.5 costs 1, but so does either input segment
        assert math.isclose(cost, 1.0, rel_tol=1e-9)
        assert math.isclose(sum(frechet_distance(c, curve) for c in t), 1.0, rel_tol=1e-9)

    def test_matches_plain_enumeration(self, rng):
        t = CurveSet.of(PolygonalCurve(rng.uniform(0, 1, (3, 2))) for _ in range(3))
        spec = GridSearchSpec((0.0, 0.0), (1.0, 1.0), 0.25)
        _, cost, _ = brute_force_median(t, 2, spec)
        G = spec.points()
        plain = min(
            sum(frechet_distance(c, G[[i, j]] if i != j else G[[i]]) for c in t)
            for i in range(len(G))
            for j in range(len(G))
        )
        assert math.isclose(cost, plain, rel_tol=1e-7)

    def test_three_vertex_search_not_worse(self, rng):
        t = CurveSet.of(PolygonalCurve([[0, 0], [0.5, 1], [1, 0]] + rng.normal(0, 0.05, (3, 2))) for _ in range(2))
        spec = GridSearchSpec((0.0, 0.0), (1.0, 1.0), 0.25, max_vertices=3)
        _, c2, _ = brute_force_median(t, 2, spec)
        _, c3, _ = brute_force_median(t, 3, spec)
        assert c3 <= c2 and c3 < 0.6


class TestSimpleShortcut:
    def test_all_vertices_in_balls(self):
        tau = PolygonalCurve([[0, 0], [1, 0], [2, 0]])
        sigma = PolygonalCurve([[0, 0.1], [1, 0.1], [2, 0.1]])
        assert simple_shortcut(sigma, tau) == sigma

    def test_segment_unchanged(self):
        sigma = PolygonalCurve([[0, 0], [3, 3]])
        tau = PolygonalCurve([[0, 1], [1, 5], [3, 2]])
        assert simple_shortcut(sigma, tau) == sigma

    def test_peak_is_shortcut(self):
        sigma = PolygonalCurve([[0, 0], [1, 2], [2, 0]])
        tau = PolygonalCurve([[0, 0], [2, 0]])
        r = frechet_distance(sigma, tau)
        out = simple_shortcut(sigma, tau)
        assert len(out) <= 4
        assert not np.any(np.all(out.vertices == [1, 2], axis=1))
        for v in out.vertices:
            assert np.linalg.norm(tau.vertices - v, axis=1).min() <= r + 1e-6
        assert frechet_distance(out, tau) <= r + 1e-6

    @given(curves(min_vertices=2, max_vertices=6), curves(min_vertices=2, max_vertices=6))
    def test_postconditions(self, sigma, tau):
        r = frechet_distance(sigma, tau)
        out = simple_shortcut(sigma, tau)
        tol = 1e-6 * max(1.0, r)
        assert len(out) <= 2 * len(sigma) - 2
        assert out.start.tolist() == sigma.start.tolist() and out.end.tolist() == sigma.end.tolist()
        for v in out.vertices:
            assert np.linalg.norm(tau.vertices - v, axis=1).min() <= r + tol
        assert frechet_distance(out, tau) <= r + tol


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSearchSpec((0.0,), (1.0,), 0)
    with pytest.raises(ValueError):
        GridSearchSpec((1.0,), (0.0,), 0.1)
