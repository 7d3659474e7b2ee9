import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polar_strategy, word_strategy
from coarsehyp.errors import UsageError
from coarsehyp.free_group_tree import E, Word, lcp
from coarsehyp.hyperbolic_plane import PolarPoint
from coarsehyp.metric_core import (ExhaustiveSample, SpaceModel,
                                   check_basepoint_shift, estimate_delta,
                                   gromov_product, product_vs_geodesic)
from coarsehyp.sampling import SeededSample


class PointCloud(SpaceModel):
    """Finite explicit metric space for small oracle checks."""

    name = "cloud"

    def __init__(self, dists, base=0):
        self.dists = dists
        self.n = max(max(i, j) for i, j in dists) + 1 if dists else 1
        self.base = base

    @property
    def basepoint(self):
        return self.base

    def distance(self, x, y):
        if x == y:
            return 0.0
        return float(self.dists[(min(x, y), max(x, y))])

    def enumerate(self, depth):
        return list(range(self.n))

    def check_point(self, p):
        if not isinstance(p, int) or not 0 <= p < self.n:
            raise UsageError(f"unknown point {p!r}")


@given(word_strategy(), word_strategy())
def test_product_with_self_is_distance(tree, x, a):
    assert gromov_product(tree, x, x, a) == tree.distance(x, a)


@given(word_strategy(), word_strategy())
def test_product_at_own_point_collapses(tree, x, y):
    assert gromov_product(tree, x, y, x) == 0.0


@given(polar_strategy(), polar_strategy(), polar_strategy())
def test_product_nonnegative_on_plane(plane, x, y, a):
    assert gromov_product(plane, x, y, a) >= -1e-9


@given(word_strategy(), word_strategy())
def test_decomposition_identity_exact_on_tree(tree, x, y):
    # integer metric: the defining identity holds bit for bit
    assert 2 * gromov_product(tree, x, y, E) == \
        tree.distance(x, E) + tree.distance(y, E) - tree.distance(x, y)


def test_tree_product_matches_common_prefix(tree):
    x, y = Word((0, 1, 2)), Word((0, 1, 0))
    # oracle: brute-force word-metric distances
    dxa, dya, dxy = 3.0, 3.0, 2.0
    assert tree.distance(x, E) == dxa and tree.distance(y, E) == dya
    assert tree.distance(x, y) == dxy
    assert gromov_product(tree, x, y, E) == (dxa + dya - dxy) / 2 == 2.0
    assert gromov_product(tree, x, y, E) == lcp(x, y)


def test_unknown_handle_is_usage_error(tree):
    with pytest.raises(UsageError):
        gromov_product(tree, E, E, "nope")


def test_delta_one_point_space():
    cloud = PointCloud({})
    est = estimate_delta(cloud, ExhaustiveSample(0))
    assert est.delta_hat == 0.0 and est.exhaustive


def test_delta_tree_depth3_exactly_zero(tree):
    est = estimate_delta(tree, ExhaustiveSample(3))
    assert est.delta_hat == 0.0
    assert est.exhaustive
    assert est.recheck(tree) == est.delta_hat


def test_delta_plane_sample_in_range(plane):
    est = estimate_delta(plane, SeededSample(4000, 11, 5))
    assert 0.0 < est.delta_hat <= 4.0
    assert not est.exhaustive
    assert est.recheck(plane) == est.delta_hat


def test_delta_deterministic_under_seed(plane):
    a = estimate_delta(plane, SeededSample(2000, 3, 4))
    b = estimate_delta(plane, SeededSample(2000, 3, 4))
    assert a.delta_hat == b.delta_hat and a.witness == b.witness


def test_delta_monotone_under_enlargement(plane):
    pts = plane.enumerate(3)
    rng = np.random.default_rng(5)
    idx = rng.integers(0, len(pts), size=(300, 4))
    quads = [tuple(pts[i] for i in row) for row in idx]
    small = estimate_delta(plane, quads[:120])
    big = estimate_delta(plane, quads)
    assert big.delta_hat >= small.delta_hat


def test_delta_empty_sample_rejected(tree):
    with pytest.raises(UsageError):
        estimate_delta(tree, [])


def test_basepoint_shift_same_point(tree):
    v = check_basepoint_shift(tree, ExhaustiveSample(2), E, E)
    assert v.passed and v.shift_bound == 0.0


def test_basepoint_shift_tree_exhaustive(tree):
    v = check_basepoint_shift(tree, ExhaustiveSample(3), E, Word((0,)))
    assert v.passed
    assert v.worst_slack <= 0.0  # integer metric: inequality holds outright


def test_basepoint_shift_plane_sample(plane):
    v = check_basepoint_shift(plane, SeededSample(3000, 2, 4),
                              PolarPoint(1.0, 0.0), PolarPoint(2.0, 1.0))
    assert v.passed


def test_product_vs_geodesic_point_on_segment(tree):
    # a on the geodesic from b to c: product 0 and min distance 0
    v = product_vs_geodesic(tree, Word((0,)), E, Word((0, 1)))
    assert v.passed and v.product == 0.0 and v.min_distance == 0.0


def test_product_vs_geodesic_tree_triple(tree):
    v = product_vs_geodesic(tree, E, Word((0, 1)), Word((0, 2)))
    assert v.passed
    assert v.product == 1.0 and v.min_distance == 1.0


def test_product_vs_geodesic_plane_diameter(plane):
    v = product_vs_geodesic(plane, plane.basepoint,
                            PolarPoint(3.0, 0.0), PolarPoint(3.0, math.pi))
    assert v.passed
    assert v.product <= 1e-9 and v.min_distance <= 1e-6


@settings(max_examples=30)
@given(word_strategy(4), word_strategy(4), word_strategy(4))
def test_product_vs_geodesic_tree_property(tree, a, b, c):
    if b == c:
        return
    assert product_vs_geodesic(tree, a, b, c, step=1.0).passed
