import itertools
import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import word_strategy
from coarsehyp import hyperbolic_plane as hp
from coarsehyp.errors import ModelError, UsageError
from coarsehyp.free_group_tree import E, EdgePoint, FreeGroupTree, Word, ball, sphere
from coarsehyp.maps import (CantorPoint, CombVertex, RadialExtensionSpec,
                            cantor_distance, cantor_map, cantor_points,
                            comb_counterexample, jump_bound, map_edge_point,
                            map_vertex, measured_jump, radial_extension,
                            sphere_angles, vertex_angle)


def test_vertex_angle_examples():
    assert vertex_angle(Word((1,))) == pytest.approx(math.pi / 2)
    assert vertex_angle(Word((0, 1))) == pytest.approx(0.0)
    assert vertex_angle(Word((0, 0))) == pytest.approx(-math.pi / 6)
    with pytest.raises(UsageError):
        vertex_angle(E)


def test_map_vertex_examples():
    assert map_vertex(E) == hp.BASEPOINT
    assert map_vertex(Word((1,))) == hp.PolarPoint(1.0, math.pi / 2)
    v = map_vertex(Word((0, 1)))
    assert v.r == 2.0 and v.phi == pytest.approx(0.0)


def test_map_edge_point_half_open():
    edge = EdgePoint(Word((0,)), 0, 0.0)
    assert map_edge_point(edge) == map_vertex(Word((0,)))  # parent's angle at t=0
    inner = map_edge_point(EdgePoint(Word((0,)), 0, 0.25))
    assert inner.r == pytest.approx(1.25)
    assert inner.phi == pytest.approx(vertex_angle(Word((0, 0))))
    assert map_edge_point(EdgePoint(Word((0,)), 0, 1.0)) == map_vertex(Word((0, 0)))


def test_depth_angles_equally_spaced():
    # oracle: sort the angles and difference them
    for k in range(1, 6):
        angles = np.sort(np.array([a % (2 * math.pi) for a in sphere_angles(k)]))
        gap = 2 * math.pi / (4 * 3 ** (k - 1))
        diffs = np.diff(angles)
        assert np.max(np.abs(diffs - gap)) < 1e-9
        assert (2 * math.pi - (angles[-1] - angles[0])) == pytest.approx(gap, abs=1e-9)
        assert len(np.unique(angles)) == len(angles)  # pairwise distinct


def test_radiality_exact_on_prefix_pairs(tree):
    # image distance never shrinks below tree distance along root geodesics
    for w in sphere(6):
        chain = [Word(w.digits[:i]) for i in range(len(w) + 1)]
        images = [map_vertex(u) for u in chain]
        for i in range(len(chain)):
            for j in range(i + 1, len(chain)):
                d_tree = j - i
                d_img = hp.distance(images[i], images[j])
                assert d_img >= d_tree - 1e-9


def test_jump_bound_values():
    # oracle: evaluate 2 pi sinh(n) / (4 * 3^(n-1))
    assert jump_bound(1) == pytest.approx(1.8460017182206612, abs=1e-12)
    assert jump_bound(2) == pytest.approx(1.8990196688146461, abs=1e-12)
    assert jump_bound(10) == pytest.approx(0.8789079787492197, abs=1e-12)
    # the bound decays geometrically past its peak at n = 2 ((e/3)^n tail)
    bounds = [jump_bound(n) for n in range(2, 61)]
    assert all(x > y for x, y in zip(bounds, bounds[1:]))
    assert jump_bound(60) < 0.01
    with pytest.raises(UsageError):
        jump_bound(0)


def test_measured_jump_below_bound():
    sup_measured = 0.0
    for n in range(1, 11):
        m = measured_jump(n)
        assert m <= jump_bound(n)
        sup_measured = max(sup_measured, m)
    assert sup_measured == pytest.approx(0.622122125093252, abs=1e-9)
    assert sup_measured <= 1.90


def test_measured_jump_example_values():
    assert measured_jump(1) <= 1.8460017182206612
    assert measured_jump(1) == pytest.approx(0.5993191481254565, abs=1e-9)
    assert measured_jump(2) <= 1.8990196688146461


def test_cantor_map_values():
    assert cantor_map(CantorPoint((0,) * 8)) == 0.0
    k = 6
    assert cantor_map(CantorPoint((1,) * k)) == 1.0 - 2.0 ** (-k)
    # oracle: partial sum of the alternating pattern
    alt = CantorPoint(tuple(1 if i % 2 == 0 else 0 for i in range(10)))
    assert cantor_map(alt) == pytest.approx(0.666015625, abs=1e-12)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=10),
       st.lists(st.integers(0, 1), min_size=1, max_size=10))
def test_cantor_map_one_lipschitz(a, b):
    x, y = CantorPoint(tuple(a)), CantorPoint(tuple(b))
    assert abs(cantor_map(x) - cantor_map(y)) <= cantor_distance(x, y) + 1e-12


def test_cantor_separation_small_bruteforce():
    # independent oracle for the separation property: plain triple loop
    pts = cantor_points(5)
    values = [cantor_map(p) for p in pts]
    for m in range(1, 5):
        r = 2.0 ** (-m)
        for i, j, k in itertools.combinations(range(len(pts)), 3):
            if (cantor_distance(pts[i], pts[j]) > r
                    and cantor_distance(pts[i], pts[k]) > r
                    and cantor_distance(pts[j], pts[k]) > r):
                gaps = (abs(values[i] - values[j]), abs(values[i] - values[k]),
                        abs(values[j] - values[k]))
                assert max(gaps) >= r / 2


def _tree_extension_spec(tree, depth, a_param):
    """Radial extension of the identity boundary map of the depth-k cells."""
    cells = {w.digits: w for w in sphere(depth)}

    def source_ray_cell(x):
        for digits, w in cells.items():
            if x.digits == digits[:len(x.digits)]:
                return digits
        return None

    def target_ray_point(cell_digits, s):
        step = round(s)
        return Word(cell_digits[:min(step, len(cell_digits))])

    return RadialExtensionSpec(
        boundary_map={d: d for d in cells}, parameter_a=a_param,
        source_ray_cell=source_ray_cell, target_ray_point=target_ray_point,
        basepoint_image=E)


def test_radial_extension_basepoint(tree):
    spec = _tree_extension_spec(tree, 4, 1.0)
    assert radial_extension(spec, tree, E) == E


def test_radial_extension_parameter_one(tree):
    spec = _tree_extension_spec(tree, 4, 1.0)
    img = radial_extension(spec, tree, Word((0, 1, 2)))
    assert tree.distance(E, img) == 3.0


def test_radial_extension_scaling(tree):
    spec = _tree_extension_spec(tree, 4, 0.5)
    img = radial_extension(spec, tree, Word((0, 1, 2, 0)))
    assert tree.distance(E, img) == 2.0


def test_radial_extension_errors(tree):
    spec = _tree_extension_spec(tree, 2, 0.0)
    with pytest.raises(UsageError):
        radial_extension(spec, tree, Word((0,)))
    shallow = _tree_extension_spec(tree, 2, 1.0)
    with pytest.raises(ModelError):
        # deeper than every enumerated ray cell: no ray through it is known
        radial_extension(shallow, tree, Word((0, 1, 2)))


def comb_bfs_oracle(comb):
    vertices = comb.enumerate(10 ** 9)
    adjacency = {v: [] for v in vertices}
    for v in vertices:
        if v.tooth > 0:
            up = CombVertex(v.spine, v.tooth - 1)
            adjacency[v].append(up)
            adjacency[up].append(v)
        elif v.spine > 0:
            up = CombVertex(v.spine - 1, 0)
            adjacency[v].append(up)
            adjacency[up].append(v)
    dist = {}
    for s in vertices:
        seen = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in seen:
                    seen[w] = seen[u] + 1
                    queue.append(w)
        dist[s] = seen
    return vertices, dist


def test_comb_metric_matches_bfs():
    comb, _ = comb_counterexample(5)
    vertices, dist = comb_bfs_oracle(comb)
    for u in vertices:
        for v in vertices:
            assert comb.distance(u, v) == dist[u][v]


def test_comb_map_geometry():
    comb, cmap = comb_counterexample(8)
    for n in range(9):
        assert cmap(CombVertex(n, 0)) == hp.PolarPoint(float(n), 0.0)
    for n in range(1, 9):
        # tooth lengths are rounded plane distances between the two spokes
        span = hp.distance(hp.PolarPoint(float(n), 0.0),
                           hp.PolarPoint(float(n), math.pi / 2))
        assert comb.tooth_length[n] == max(1, round(span))
        end = cmap(CombVertex(n, comb.tooth_length[n]))
        assert hp.distance(end, hp.PolarPoint(float(n), math.pi / 2)) <= 0.5


def test_comb_map_one_lipschitz_on_pieces():
    comb, cmap = comb_counterexample(8)
    for n in range(1, 9):
        pts = [CombVertex(n, j) for j in range(comb.tooth_length[n] + 1)]
        for a, b in itertools.combinations(pts, 2):
            stretch = hp.distance(cmap(a), cmap(b)) - comb.distance(a, b)
            assert stretch <= 0.01  # rounding defect only
    spine = [CombVertex(n, 0) for n in range(9)]
    for a, b in itertools.combinations(spine, 2):
        assert hp.distance(cmap(a), cmap(b)) == pytest.approx(comb.distance(a, b))


def test_comb_not_visual_witnesses():
    comb, cmap = comb_counterexample(12)
    base = comb.basepoint
    for n in (8, 10, 12):
        tooth_end = CombVertex(n, comb.tooth_length[n])
        spine = CombVertex(n, 0)
        src = (comb.distance(tooth_end, base) + comb.distance(spine, base)
               - comb.distance(tooth_end, spine)) / 2
        img_a, img_b = cmap(tooth_end), cmap(spine)
        img = (hp.distance(img_a, hp.BASEPOINT) + hp.distance(img_b, hp.BASEPOINT)
               - hp.distance(img_a, img_b)) / 2
        assert src == n
        assert img <= 1.0  # bounded image products against growing source ones
