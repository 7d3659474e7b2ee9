from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import word_strategy
from coarsehyp.errors import UsageError
from coarsehyp.free_group_tree import (E, BoundaryWord, EdgePoint, FreeGroupTree,
                                       Word, ball, edge_point_distance, lcp,
                                       path_vertices, sphere, truncated_boundary,
                                       word_distance)
from coarsehyp.metric_core import ExhaustiveSample, estimate_delta, gromov_product


def bfs_distances(depth):
    """Independent oracle: explicit adjacency + breadth-first search."""
    vertices = ball(depth)
    adjacency = {w: [] for w in vertices}
    for w in vertices:
        if w.digits:
            adjacency[w].append(w.parent)
            adjacency[w.parent].append(w)
    dist = {}
    for source in vertices:
        seen = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in seen:
                    seen[v] = seen[u] + 1
                    queue.append(v)
        dist[source] = seen
    return vertices, dist


def test_word_distance_matches_bfs_to_depth5():
    vertices, dist = bfs_distances(5)
    for u in vertices:
        for v in vertices:
            assert word_distance(u, v) == dist[u][v]


def test_gromov_product_is_lcp_to_depth5(tree):
    vertices = ball(5)
    for u in vertices:
        for v in vertices:
            assert gromov_product(tree, u, v, E) == lcp(u, v)


def test_word_examples():
    assert word_distance(E, Word((0,))) == 1
    assert word_distance(Word((0, 1)), Word((0, 2))) == 2
    assert word_distance(Word((1, 2, 0)), Word((1, 2, 0))) == 0


def test_word_digit_validation():
    with pytest.raises(UsageError):
        Word((4,))
    with pytest.raises(UsageError):
        Word((0, 3))
    Word((3, 2, 1, 0))  # first digit up to 3, later ones up to 2


def test_sphere_counts():
    assert sphere(0) == [E]
    assert len(sphere(1)) == 4
    assert len(sphere(3)) == 36  # 4 * 3^2, cross-checked by enumeration
    for n in range(1, 6):
        assert len(sphere(n + 1)) == 3 * len(sphere(n))


def test_sphere_deterministic_lexicographic():
    s2 = sphere(2)
    assert s2 == sorted(s2, key=lambda w: w.digits)
    assert s2[0] == Word((0, 0)) and s2[-1] == Word((3, 2))


def test_tree_delta_zero(tree):
    est = estimate_delta(tree, ExhaustiveSample(3))
    assert est.delta_hat == 0.0


def test_edge_point_distance_same_edge():
    p = EdgePoint(E, 0, 0.2)
    q = EdgePoint(E, 0, 0.7)
    assert edge_point_distance(p, q) == pytest.approx(0.5)


def test_edge_point_distance_through_root():
    p = EdgePoint(E, 0, 0.5)
    q = EdgePoint(E, 1, 0.5)
    assert edge_point_distance(p, q) == pytest.approx(1.0)


def test_edge_point_vertex_identification():
    p = EdgePoint(Word((0,)), 1, 1.0)
    assert p.as_vertex() == Word((0, 1))
    assert edge_point_distance(p, Word((0, 1))) == 0.0
    assert edge_point_distance(EdgePoint(Word((0,)), 1, 0.0), Word((0,))) == 0.0


@settings(max_examples=50)
@given(word_strategy(4), st.integers(0, 2), st.floats(0, 1), st.floats(0, 1))
def test_edge_point_distance_matches_vertex_routes(w, digit, t1, t2):
    if not w.digits:
        return
    p, q = EdgePoint(w, digit, t1), EdgePoint(w, digit, t2)
    assert edge_point_distance(p, q) == pytest.approx(abs(t1 - t2), abs=1e-12)


def test_edge_point_validation():
    with pytest.raises(UsageError):
        EdgePoint(E, 4, 0.5)
    with pytest.raises(UsageError):
        EdgePoint(Word((0,)), 3, 0.5)
    with pytest.raises(UsageError):
        EdgePoint(E, 0, 1.5)


def test_truncated_boundary_products():
    cells = truncated_boundary(3)
    assert len(cells) == len(sphere(3))
    a = BoundaryWord((0, 1, 0))
    b = BoundaryWord((0, 2, 0))
    assert lcp(Word(a.digits), Word(b.digits)) == 1
    with pytest.raises(UsageError):
        truncated_boundary(0)


def test_geodesic_vertices(tree):
    path = tree.geodesic(Word((0, 1)), Word((0, 2)), 1.0)
    assert path == [Word((0, 1)), Word((0,)), Word((0, 2))]
    assert path_vertices(E, Word((1, 0))) == [E, Word((1,)), Word((1, 0))]


def test_geodesic_fine_sampling(tree):
    path = tree.geodesic(E, Word((2, 1)), 0.5)
    assert path[0] == E and path[-1] == Word((2, 1))
    for a, b in zip(path, path[1:]):
        assert tree.distance(a, b) <= 0.5 + 1e-12
    total = sum(tree.distance(a, b) for a, b in zip(path, path[1:]))
    assert total == pytest.approx(2.0)


def test_distance_matrix_matches_scalar(tree):
    pts = ball(4)
    mat = tree.distance_matrix(pts)
    for i in (0, 3, 50, 100):
        for j in (1, 17, 160):
            assert mat[i, j] == tree.distance(pts[i], pts[j])


@given(word_strategy(5), word_strategy(5), word_strategy(5))
def test_word_metric_triangle(x, y, z):
    assert word_distance(x, y) <= word_distance(x, z) + word_distance(z, y)


@given(word_strategy(5), word_strategy(5))
def test_word_metric_symmetric_and_definite(x, y):
    assert word_distance(x, y) == word_distance(y, x)
    assert (word_distance(x, y) == 0) == (x == y)
