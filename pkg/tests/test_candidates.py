import math

import numpy as np
import pytest

from klmedian import candidates as cand
from klmedian.candidates import (
    CandidateParams,
    EnumerationCaps,
    advanced_grid,
    advanced_sample_size,
    candidates_advanced,
    candidates_simple,
    enumerate_curves,
    iter_region_curves,
    median5,
    median5_grid,
    median5_sample_sizes,
    simple_grid,
    simple_sample_size,
    subset_size,
)
from klmedian.cost import CostEvaluator, cost
from klmedian.errors import ParameterError
from klmedian.frechet import frechet_distance
from klmedian.geometry import CurveSet, PolygonalCurve
from klmedian.median_seed import SampleScale
from klmedian.oracle import GridSearchSpec, brute_force_median
from klmedian.rng import make_rng
from klmedian.synthetic import planted_instance
from klmedian.verify import tiny_instance

SIGMA = PolygonalCurve([[0, 0], [1, 1]])
COARSE = EnumerationCaps(10**6, 10**4, "coarsen")


class TestFormulas:
    def test_simple_sample_size(self):
        assert simple_sample_size(1, 0.5, 0.5 / 3) == 100

    def test_subset_size(self):
        assert subset_size(100, 1) == 50
        assert subset_size(48, 164) == 1

    def test_advanced_sample_size(self):
        assert advanced_sample_size(1, 0.5, 0.025, 3) == 2662

    def test_advanced_sample_size_clamps_log_at_l2(self):
        # 2l-4 = 0 would make the logarithm undefined; it is treated as 1
        assert advanced_sample_size(1, 0.5, 0.025, 2) == 1331

    def test_simple_grid(self):
        radius, width = simple_grid(0.5, 10, 100, 34.0, 0.5, 2)
        assert radius == pytest.approx(102.0, rel=1e-12)
        assert width == pytest.approx(0.0017677669529663688, rel=1e-12)

    def test_advanced_grid_radius(self):
        radius, width = advanced_grid(0.5, 10, 200, 34.0, 0.02, 3, 2)
        assert radius == pytest.approx(1_020_000.0, rel=1e-12)
        assert width == pytest.approx(3.535533905932738e-05, rel=1e-12)

    def test_median5_sizes_and_grid(self):
        assert median5_sample_sizes(0.5, 0.5) == (9, 1081)
        radius, width = median5_grid(2.0, 0.1, 10, 2)
        assert radius == pytest.approx(23.12, rel=1e-12)
        assert width == pytest.approx(0.0282842712474619, rel=1e-12)


class TestEnumeration:
    def test_two_points(self):
        a, b = [0.0, 0.0], [1.0, 0.0]
        got, truncated = enumerate_curves(np.array([a, b]), 2)
        assert not truncated
        assert {tuple(map(tuple, c.tolist())) for c in got} == {(tuple(a),), (tuple(b),), (tuple(a), tuple(b)), (tuple(b), tuple(a))}

    def test_single_point(self):
        got, _ = enumerate_curves(np.array([[2.0, 3.0]]), 5)
        assert [c.tolist() for c in got] == [[[2.0, 3.0]]]

    def test_three_points_three_vertices(self):
        got, _ = enumerate_curves(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), 3)
        assert len(got) == 3 + 6 + 12

    def test_collinear_points_dedupe(self):
        got, _ = enumerate_curves(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), 3)
        # 0-1-2 and 2-1-0 collapse onto 0-2 and 2-0
        assert len(got) == 3 + 6 + 12 - 2
        assert len({c.key() for c in got}) == len(got)

    def test_cap_truncates(self):
        got, truncated = enumerate_curves(np.random.default_rng(0).uniform(size=(5, 2)), 3, EnumerationCaps(max_candidates=7))
        assert truncated and len(got) == 7

    def test_order_is_length_first(self):
        got, _ = enumerate_curves(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), 3)
        assert [len(c) for c in got] == sorted(len(c) for c in got)

    def test_region_curves(self):
        s = np.array([[0.0, 0.0], [1.0, 0.0]])
        e = np.array([[1.0, 0.0], [5.0, 5.0]])
        inner = np.array([[2.0, 2.0]])
        got = [c.tolist() for c in iter_region_curves(s, inner, e, 3)]
        assert got[0] == [[1.0, 0.0]]
        assert [[0.0, 0.0], [5.0, 5.0]] in got and [[1.0, 0.0], [2.0, 2.0], [5.0, 5.0]] in got
        assert all(c[0] in s.tolist() and c[-1] in e.tolist() for c in got)

    def test_bad_input(self):
        with pytest.raises(ParameterError):
            enumerate_curves(np.empty((0, 2)), 2)
        with pytest.raises(ParameterError):
            EnumerationCaps(overflow="drop")


class TestRegionPools:
    def test_subset_of_plain_pool(self, rng):
        t = CurveSet.of(PolygonalCurve(rng.uniform(0, 1, (3, 2))) for _ in range(4))
        region = cand._Region.of(t, 0.2)
        centers = np.vstack([c.vertices for c in t])
        caps = EnumerationCaps()
        plain = cand._Pool(centers, 0.5, 0.05, caps, 10**6)
        pools = cand._RegionPools(region, centers, 0.5, 0.05, caps, 10**6)
        keys = {p.tobytes() for p in plain.points}
        for pool in (pools.start, pools.inner, pools.end):
            assert {p.tobytes() for p in pool} <= keys
        # nothing within rho of a start point is lost
        near = [p for p in plain.points if np.linalg.norm(region.starts - p, axis=1).min() <= 0.2]
        assert {p.tobytes() for p in near} == {p.tobytes() for p in pools.start}

    def test_coarsen_fits_budget(self, rng):
        t = CurveSet.of(PolygonalCurve(rng.uniform(0, 1, (3, 2))) for _ in range(4))
        region = cand._Region.of(t, 0.3)
        pools = cand._RegionPools(region, t[0].vertices, 100.0, 1e-6, COARSE, 50)
        assert pools.coarsened and pools.width > 1e-6
        assert max(len(pools.start), len(pools.inner), len(pools.end)) <= 50


def params(beta=2.0, delta=0.5, epsilon=0.5, l=2, scale=0.05, caps=COARSE):
    return CandidateParams(beta, delta, epsilon, l, SampleScale.test(scale), caps)


class TestSimple:
    def test_copies_contain_sigma(self):
        t = CurveSet.of([SIGMA] * 5)
        out = candidates_simple(t, params(), make_rng(0))
        assert SIGMA in out.curves

    def test_zero_cost_grid_uses_own_vertices(self):
        t = CurveSet.of([SIGMA] * 5)
        out = candidates_simple(t, params(caps=EnumerationCaps(restrict=False)), make_rng(0))
        a, b = SIGMA.vertices
        expected = {SIGMA, PolygonalCurve(a), PolygonalCurve(b), SIGMA.reversed()}
        assert set(out.curves) == expected
        assert out.provenance[out.curves.index(SIGMA)] == cand.SEED

    def test_tiny_instance_against_oracle(self):
        rng = make_rng(4)
        t = tiny_instance(rng, 4, 3)
        eps = 0.5
        out = candidates_simple(t, params(epsilon=eps), make_rng(5))
        best = min(cost(t, [c]) for c in out.curves)
        _, opt, _ = brute_force_median(t, 2, GridSearchSpec.around(t, 0.02))
        assert best <= (3 + eps) * opt + 1e-6

    def test_diagnostics(self):
        t = CurveSet.of(PolygonalCurve(np.random.default_rng(1).uniform(size=(3, 2))) for _ in range(5))
        out = candidates_simple(t, params(), make_rng(1))
        d = out.diagnostics
        assert d["subsets_processed"] >= 1 and d["scale"] == {"factor": 0.05, "mode": "test"}
        assert len(out) == len(out.provenance) == len(set(out.curves))

    def test_seeded(self):
        t = tiny_instance(make_rng(2), 5, 3)
        a = candidates_simple(t, params(), make_rng(9))
        b = candidates_simple(t, params(), make_rng(9))
        assert a.curves == b.curves

    def test_every_curve_has_at_most_2l_minus_2_vertices(self):
        t = tiny_instance(make_rng(3), 4, 4)
        out = candidates_simple(t, params(l=3, caps=EnumerationCaps(10**5, 2000, "coarsen")), make_rng(3))
        assert max(len(c) for c, tag in zip(out.curves, out.provenance) if tag == cand.GRID) <= 4

    def test_empty(self):
        with pytest.raises(ParameterError):
            candidates_simple(CurveSet.of([]), params(), make_rng(0))


class TestAdvanced:
    def test_copies_contain_sigma(self):
        t = CurveSet.of([SIGMA] * 5)
        assert SIGMA in candidates_advanced(t, params(epsilon=0.15, scale=0.003), make_rng(0)).curves

    def test_epsilon_limit(self):
        with pytest.raises(ParameterError):
            candidates_advanced(CurveSet.of([SIGMA]), params(epsilon=0.2), make_rng(0))

    def test_faithful_constants_hit_caps(self):
        t = tiny_instance(make_rng(6), 4, 2)
        out = candidates_advanced(t, params(epsilon=0.15, scale=0.003, caps=EnumerationCaps(1000, 500, "truncate", restrict=False)), make_rng(0))
        assert out.truncated

    def test_tiny_instance_against_oracle(self):
        t = tiny_instance(make_rng(8), 4, 2)
        eps = 0.15
        out = candidates_advanced(t, params(epsilon=eps, scale=0.003), make_rng(2))
        best = min(cost(t, [c]) for c in out.curves)
        _, opt, add = brute_force_median(t, 2, GridSearchSpec.around(t, 0.02))
        assert best <= (1 + eps) * (opt + add)


class TestMedian5:
    def test_copies(self):
        t = CurveSet.of([SIGMA] * 4)
        res = median5(t, 0.2, 0.5, 2, SampleScale.test(0.01), COARSE, make_rng(0))
        assert res.cost == 0 and frechet_distance(res.curve, SIGMA) == 0

    def test_planted(self):
        inst = planted_instance(1, 10, 2, 2, 0.05, make_rng(3), noise="ball")
        res = median5(inst.curves, 0.2, 0.5, 2, SampleScale.test(0.01), COARSE, make_rng(3))
        assert res.cost <= 5.5 * inst.bound
        assert len(res.curve) <= 2

    def test_reported_cost_matches_recomputation(self):
        t = tiny_instance(make_rng(10), 5, 3)
        with CostEvaluator(cache=False) as ev:
            res = median5(t, 0.2, 0.5, 2, SampleScale.test(0.01), COARSE, make_rng(4), ev)
        assert math.isclose(res.cost, sum(frechet_distance(c, res.curve) for c in t), rel_tol=1e-12)
