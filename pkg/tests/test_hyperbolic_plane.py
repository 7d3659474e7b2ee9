import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polar_strategy
from coarsehyp import hyperbolic_plane as hp
from coarsehyp.errors import UsageError
from coarsehyp.hyperbolic_plane import PolarPoint
from coarsehyp.metric_core import ExhaustiveSample, estimate_delta

radius = st.floats(0.0, 6.0, allow_nan=False, allow_infinity=False)
angle = st.floats(-7.0, 7.0, allow_nan=False, allow_infinity=False)


@given(radius, angle)
def test_distance_to_basepoint(r, phi):
    assert hp.distance(PolarPoint(r, phi), hp.BASEPOINT) == pytest.approx(r, abs=1e-9)


@given(radius, radius, angle)
def test_distance_same_ray(r1, r2, phi):
    d = hp.distance(PolarPoint(r1, phi), PolarPoint(r2, phi))
    assert d == pytest.approx(abs(r1 - r2), abs=1e-9)


@given(radius, angle)
def test_distance_through_basepoint(r, phi):
    d = hp.distance(PolarPoint(r, phi), PolarPoint(r, phi + math.pi))
    assert d == pytest.approx(2 * r, abs=1e-9)


@given(polar_strategy(), polar_strategy())
def test_distance_symmetric(p, q):
    assert hp.distance(p, q) == hp.distance(q, p)


@given(polar_strategy(), polar_strategy(), polar_strategy())
def test_triangle_inequality(p, q, m):
    assert hp.distance(p, q) <= hp.distance(p, m) + hp.distance(m, q) + 1e-9


@given(polar_strategy(), polar_strategy(), st.floats(-7.0, 7.0, allow_nan=False))
def test_rotation_invariance(p, q, theta):
    d0 = hp.distance(p, q)
    d1 = hp.distance(PolarPoint(p.r, p.phi + theta), PolarPoint(q.r, q.phi + theta))
    assert d1 == pytest.approx(d0, abs=1e-12)


def test_point_primitives():
    assert hp.point_A(0.0, 1.3) == hp.BASEPOINT
    assert hp.point_B(0.0, math.pi / 2) == PolarPoint(1.0, math.pi / 2)
    assert hp.point_B(3.0, 0.0) == PolarPoint(4.0, 0.0)
    assert hp.segment_l(2.0, 0.0, 0.0) == hp.point_A(2.0, 0.0)
    assert hp.segment_l(2.0, 0.0, 1.0) == hp.point_B(2.0, 0.0)
    assert hp.segment_l(2.0, 0.0, 0.5) == PolarPoint(2.5, 0.0)


def test_point_primitive_errors():
    with pytest.raises(UsageError):
        hp.point_A(-1.0, 0.0)
    with pytest.raises(UsageError):
        hp.point_B(-0.5, 0.0)
    with pytest.raises(UsageError):
        hp.segment_l(1.0, 0.0, 1.5)


def test_circumference_values():
    assert hp.circumference(0.0) == 0.0
    # oracle: direct evaluation of 2*pi*sinh
    assert hp.circumference(1.0) == pytest.approx(7.384006872882645, abs=1e-12)
    assert hp.circumference(2.0) == pytest.approx(22.788236025775753, abs=1e-12)


def test_basepoint_equality_ignores_angle():
    assert PolarPoint(0.0, 1.0) == PolarPoint(0.0, -2.0)
    assert PolarPoint(1.0, 0.0) == PolarPoint(1.0, 2 * math.pi)
    assert PolarPoint(1.0, 0.0) != PolarPoint(1.0, 1.0)


def test_geodesic_same_ray_shares_angle():
    p, q = PolarPoint(1.0, 0.7), PolarPoint(4.0, 0.7)
    for m in hp.geodesic(p, q, 0.5):
        assert m.phi == pytest.approx(0.7, abs=1e-9)


def test_geodesic_midpoint_is_basepoint():
    p, q = PolarPoint(3.0, 0.0), PolarPoint(3.0, math.pi)
    mid = hp.geodesic_point(p, q, 3.0)
    assert mid.r <= 1e-6


def test_geodesic_additivity_quarter_turn():
    p, q = PolarPoint(2.0, 0.0), PolarPoint(2.0, math.pi / 2)
    d = hp.distance(p, q)
    for m in hp.geodesic(p, q, 0.1):
        assert abs(hp.distance(p, m) + hp.distance(m, q) - d) <= 1e-9


def test_geodesic_spacing_and_endpoints():
    p, q = PolarPoint(1.0, 0.2), PolarPoint(3.0, 2.0)
    samples = hp.geodesic(p, q, 0.3)
    assert samples[0] == p and samples[-1] == q
    for a, b in zip(samples, samples[1:]):
        assert hp.distance(a, b) <= 0.3 + 1e-9


def test_geodesic_bad_step():
    with pytest.raises(UsageError):
        hp.geodesic(PolarPoint(1.0, 0.0), PolarPoint(2.0, 0.0), 0.0)


def test_small_exhaustive_delta_pinned(plane):
    est = estimate_delta(plane, ExhaustiveSample(2))
    assert 0.0 < est.delta_hat <= 4.0
    # regression pin: deterministic grid, value verified against a pure-python
    # brute force over all quadruples (2.5832417482829584, same to 2e-15)
    assert est.delta_hat == pytest.approx(2.5832417482829566, abs=1e-9)
    again = estimate_delta(plane, ExhaustiveSample(2))
    assert again.delta_hat == est.delta_hat


def test_enumerate_deterministic(plane):
    assert plane.enumerate(3) == plane.enumerate(3)
    assert plane.enumerate(2)[0] == hp.BASEPOINT


def test_distance_matrix_matches_scalar(plane):
    pts = plane.enumerate(2)
    mat = plane.distance_matrix(pts)
    for i in (0, 7, 23):
        for j in (1, 11, 31):
            assert mat[i, j] == pytest.approx(hp.distance(pts[i], pts[j]), abs=1e-12)
