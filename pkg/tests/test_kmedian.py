import itertools
import math

import numpy as np
import pytest

from klmedian.candidates import EnumerationCaps
from klmedian.cost import CostEvaluator, cost
from klmedian.errors import ParameterError
from klmedian.geometry import CurveSet, PolygonalCurve
from klmedian.kmedian import ClusteringParams, cluster, cluster_beta, kmedian, prune_partition
from klmedian.median_seed import SampleScale
from klmedian.rng import make_rng
from klmedian.synthetic import planted_instance


class MatrixEvaluator:
    """Stands in for CostEvaluator with a fixed distance column."""

    def __init__(self, d):
        self.d = np.asarray(d, dtype=float)

    def distance_matrix(self, curves, centers):
        return self.d[:, None]


def points(n):
    return CurveSet.of(PolygonalCurve([[float(i), 0.0]]) for i in range(n))


def removed_ids(t, d):
    _, removed = prune_partition(t, [PolygonalCurve([[0.0, 0.0]])], MatrixEvaluator(d))
    return set(removed.ids)


def is_valid_prune(d, ids, removed):
    n = len(d)
    if len(removed) != n // 2:
        return False
    keys = {i: (d[k], i) for k, i in enumerate(ids)}
    return all(keys[r] < keys[k] for r in removed for k in ids if k not in removed)


class TestPrunePartition:
    def test_single_curve(self):
        t = points(1)
        kept, removed = prune_partition(t, [t[0]])
        assert kept.ids == (0,) and removed.ids == ()

    def test_distinct_distances(self):
        assert removed_ids(points(4), [3, 1, 4, 2]) == {1, 3}

    def test_all_equal_uses_ids(self):
        t = CurveSet.of(list(points(5)), ids=[40, 10, 30, 20, 50])
        assert removed_ids(t, [1.0] * 5) == {10, 20}

    @pytest.mark.parametrize("n", range(1, 7))
    def test_exhaustive(self, n):
        t = points(n)
        for d in itertools.product(range(n), repeat=n):
            assert is_valid_prune(d, t.ids, removed_ids(t, d)), d

    def test_real_distances(self):
        t = CurveSet.of(PolygonalCurve([[x, 0.0], [x, 1.0]]) for x in (5.0, 1.0, 3.0, 2.0, 4.0))
        kept, removed = prune_partition(t, [PolygonalCurve([[0.0, 0.0], [0.0, 1.0]])])
        assert removed.ids == (1, 3) and kept.ids == (0, 2, 4)

    def test_needs_centers(self):
        with pytest.raises(ParameterError):
            prune_partition(points(3), [])


def constant_plugin(candidates):
    def plugin(t, beta, delta, epsilon, rng):
        return list(candidates)

    return plugin


class TestRecursion:
    def test_kappa_zero_returns_centers(self):
        x = PolygonalCurve([[1.0, 1.0]])
        assert kmedian(points(3), [x], 0, 10, 0.1, 0.1, constant_plugin([]), make_rng(0)) == [x]

    def test_kappa_covers_input(self):
        t = points(2)
        assert kmedian(t, [], 2, 10, 0.1, 0.1, constant_plugin([]), make_rng(0)) == list(t)

    def test_picks_best_candidates(self):
        t = CurveSet.of([[[0.0, 0.0]], [[0.1, 0.0]], [[10.0, 0.0]], [[10.1, 0.0]], [[10.2, 0.0]]])
        a, b, far = PolygonalCurve([[0.05, 0]]), PolygonalCurve([[10.1, 0]]), PolygonalCurve([[50.0, 0]])
        got = kmedian(t, [], 2, 10, 0.1, 0.1, constant_plugin([far, a, b]), make_rng(0))
        assert {x.key() for x in got} == {a.key(), b.key()}

    def test_plugin_receives_split_delta(self):
        seen = []

        def plugin(t, beta, delta, epsilon, rng):
            seen.append((beta, delta, epsilon))
            return []

        kmedian(points(6), [], 2, 7.0, 0.3, 0.2, plugin, make_rng(0))
        assert seen and all(s == (7.0, 0.15, 0.2) for s in seen)

    def test_rejects_negative_kappa(self):
        with pytest.raises(ParameterError):
            kmedian(points(2), [], -1, 10, 0.1, 0.1, constant_plugin([]), make_rng(0))


def large_cluster_plugin(bases, labels_of, beta):
    """Returns the planted base of every cluster holding >= |t|/beta of the curves."""

    def plugin(t, b, delta, epsilon, rng):
        counts = np.bincount([labels_of[i] for i in t.ids], minlength=len(bases))
        return [bases[j] for j in range(len(bases)) if counts[j] >= len(t) / beta]

    return plugin


def test_oracle_plugin_recovers_small_cluster():
    # cluster 1 is too small for the plugin until pruning removes cluster 0
    bases = [PolygonalCurve([[0.0, 0.0], [1.0, 0.0]]), PolygonalCurve([[20.0, 20.0], [21.0, 20.0]])]
    rng = np.random.default_rng(5)
    curves, labels = [], []
    for j, size in enumerate((36, 3)):
        for _ in range(size):
            curves.append(PolygonalCurve(bases[j].vertices + rng.uniform(-0.05, 0.05, (2, 2))))
            labels.append(j)
    t = CurveSet.of(curves)
    beta = 10
    got = kmedian(t, [], 2, beta, 0.1, 0.1, large_cluster_plugin(bases, labels, beta), make_rng(0))
    assert cost(t, got) <= (1 + 16 / (beta - 4)) * cost(t, bases)


class TestCluster:
    def test_beta_arithmetic(self):
        assert cluster_beta(2, 0.1, "simple") == pytest.approx((804.0, 0.02))
        assert cluster_beta(2, 0.3, "advanced") == pytest.approx((164.0, 0.1))

    def test_copies(self):
        sigma = PolygonalCurve([[0, 0], [1, 2]])
        t = CurveSet.of([sigma] * 6)
        p = ClusteringParams(k=1, l=2, epsilon=0.5, scale=SampleScale.test(0.01), caps=EnumerationCaps(10**5, 50, "coarsen"))
        res = cluster(t, p, "simple")
        assert res.total_cost == 0 and res.assignment == [0] * 6

    def test_planted_two_clusters(self):
        inst = planted_instance(2, 10, 2, 2, 0.05, make_rng(1))
        p = ClusteringParams(k=2, l=2, epsilon=0.5, seed=1, scale=SampleScale.test(0.001), caps=EnumerationCaps(10**5, 30, "coarsen"))
        res = cluster(inst.curves, p, "simple")
        assert res.total_cost <= 3.5 * inst.bound
        assert len(set(res.assignment)) == 2
        assert math.isclose(sum(res.cluster_costs(inst.curves)), res.total_cost, rel_tol=1e-12)
        assert res.diagnostics["scale"] == {"factor": 0.001, "mode": "test"}
        assert res.diagnostics["plugin_calls"] >= 1

    def test_advanced_epsilon_limit(self):
        with pytest.raises(ParameterError):
            cluster(CurveSet.of([[[0, 0]]]), ClusteringParams(k=1, l=2, epsilon=0.9), "advanced")

    def test_unknown_algorithm(self):
        with pytest.raises(ParameterError):
            cluster(CurveSet.of([[[0, 0]]]), ClusteringParams(k=1, l=2), "fancy")

    def test_threads_agree(self):
        inst = planted_instance(2, 8, 3, 2, 0.05, make_rng(4))
        p1 = ClusteringParams(k=2, l=3, epsilon=0.5, seed=4, scale=SampleScale.test(0.001), caps=EnumerationCaps(10**5, 20, "coarsen"))
        p4 = ClusteringParams(**{**p1.__dict__, "threads": 4})
        a, b = cluster(inst.curves, p1), cluster(inst.curves, p4)
        assert a.total_cost == b.total_cost and a.centers == b.centers


def test_evaluator_cache_is_transparent(rng):
    t = [PolygonalCurve(rng.uniform(size=(3, 2))) for _ in range(5)]
    c = [PolygonalCurve(rng.uniform(size=(2, 2)))]
    assert CostEvaluator(cache=True).cost(t, c) == CostEvaluator(cache=False).cost(t, c)
