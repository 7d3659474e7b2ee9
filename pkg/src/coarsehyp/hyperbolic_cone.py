"""Hyperbolic cones over compact metric spaces, as leveled net graphs.

A compact space of diameter <= 1 is presented by one 2^-k-net per level k.
The cone is the graph whose level-k vertices are the net points, with unit
edges inside a level when the underlying distance is at most 2 * 2^-k and
across adjacent levels when it is at most 2^-k (the density radius, so
parent links always exist; a wider vertical reach would let zigzag paths
outrun the metric logarithm).  The graph metric is an exact integer metric,
every level-k vertex sits at distance exactly k from the level-0 basepoint,
and Gromov products of deep vertices track log2(1 / d_Z) up to a bounded
error, which is all the boundary checks need (log base 2 standing in for
the classical base-e visual parameter).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, UsageError
from .maps import CantorPoint, SpaceMap, cantor_distance
from .metric_core import SpaceModel


class CompactModel:
    """A compact metric space presented by nested finite nets."""

    name = "compact"

    def points(self, level):
        raise NotImplementedError

    def metric(self, x, y):
        raise NotImplementedError

    def validate(self, max_level):
        """Check net separation and hierarchical density level by level.

        Raises ModelError with a witness pair/point on the first violation.
        Density is certified against the next finer net, which is the
        strongest exhaustively checkable form.
        """
        if len(self.points(0)) != 1:
            raise ModelError("level 0 must be a single point", witness=self.points(0))
        for k in range(max_level + 1):
            net = self.points(k)
            sep = 2.0 ** (-k)
            for i, u in enumerate(net):
                for v in net[i + 1:]:
                    if self.metric(u, v) < sep - 1e-12:
                        raise ModelError(f"net at level {k} not {sep}-separated",
                                         witness=(u, v))
            if k < max_level:
                for v in self.points(k + 1):
                    if min(self.metric(u, v) for u in net) > sep + 1e-12:
                        raise ModelError(f"net at level {k} not {sep}-dense",
                                         witness=v)
        deepest = self.points(max_level)
        for i, u in enumerate(deepest):
            for v in deepest[i + 1:]:
                if self.metric(u, v) > 1.0 + 1e-12:
                    raise ModelError("diameter exceeds 1", witness=(u, v))


class CantorModel(CompactModel):
    """Binary sequences with metric sum |x_i - y_i| / 2^i; level-k net = depth-k strings."""

    name = "cantor"

    def points(self, level):
        out = [CantorPoint(())]
        for _ in range(level):
            out = [CantorPoint(p.bits + (b,)) for p in out for b in (0, 1)]
        return out

    def metric(self, x, y):
        return cantor_distance(x, y)


class IntervalModel(CompactModel):
    """The unit interval; level-k net = dyadic midpoints (2i+1)/2^(k+1)."""

    name = "interval"

    def points(self, level):
        m = 2 ** level
        return [(2 * i + 1) / (2.0 * m) for i in range(m)]

    def metric(self, x, y):
        return abs(x - y)


class CircleModel(CompactModel):
    """Circle of circumference 1 with arc metric; level-k net = 2^k equispaced points."""

    name = "circle"

    def points(self, level):
        m = 2 ** level
        return [i / float(m) for i in range(m)]

    def metric(self, x, y):
        d = abs(x - y) % 1.0
        return min(d, 1.0 - d)


class CustomNetModel(CompactModel):
    """Nets given explicitly: point names per level and a full distance table."""

    name = "custom-net"

    def __init__(self, levels, distances):
        self.levels = [list(lv) for lv in levels]
        self.distances = {frozenset((a, b)): float(d) for a, b, d in distances}

    def points(self, level):
        return list(self.levels[level])

    def metric(self, x, y):
        if x == y:
            return 0.0
        try:
            return self.distances[frozenset((x, y))]
        except KeyError:
            raise UsageError(f"no distance recorded for {x!r}, {y!r}") from None


def load_compact_model(source):
    """Build a CompactModel from a JSON description (path, file, or dict).

    {"kind": "cantor" | "interval" | "circle"} or
    {"kind": "custom-net", "levels": [["a"], ["a","b"], ...],
     "distances": [["a","b",0.5], ...]}.
    """
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            source = json.load(fh)
    kind = source.get("kind")
    if kind == "cantor":
        return CantorModel()
    if kind == "interval":
        return IntervalModel()
    if kind == "circle":
        return CircleModel()
    if kind == "custom-net":
        return CustomNetModel(source["levels"], source["distances"])
    raise UsageError(f"unknown compact model kind: {kind!r}")


@dataclass(frozen=True)
class ConeVertex:
    level: int
    index: int


class ApproxGraph(SpaceModel):
    """The cone graph over a CompactModel, up to a maximum level."""

    geodesic_slack = 0.0
    visual_constant = 0.0  # in-graph: level-k vertices lie on vertical chains

    def __init__(self, compact, max_level):
        self.compact = compact
        self.max_level = max_level
        self.name = f"cone-{compact.name}"
        self.nets = [compact.points(k) for k in range(max_level + 1)]
        self.vertices = [ConeVertex(k, i)
                         for k in range(max_level + 1)
                         for i in range(len(self.nets[k]))]
        self._index = {v: n for n, v in enumerate(self.vertices)}
        self.adjacency = [[] for _ in self.vertices]
        for k, net in enumerate(self.nets):
            horizontal = 2.0 * 2.0 ** (-k)
            vertical = 2.0 ** (-k)
            for i, u in enumerate(net):
                for j in range(i + 1, len(net)):
                    if compact.metric(u, net[j]) <= horizontal + 1e-12:
                        self._link(ConeVertex(k, i), ConeVertex(k, j))
                if k < max_level:
                    for j, v in enumerate(self.nets[k + 1]):
                        if compact.metric(u, v) <= vertical + 1e-12:
                            self._link(ConeVertex(k, i), ConeVertex(k + 1, j))
        self._dists = None

    def _link(self, u, v):
        iu, iv = self._index[u], self._index[v]
        self.adjacency[iu].append(iv)
        self.adjacency[iv].append(iu)

    def net_point(self, v):
        return self.nets[v.level][v.index]

    @property
    def basepoint(self):
        return ConeVertex(0, 0)

    def check_point(self, p):
        if not isinstance(p, ConeVertex) or p not in self._index:
            raise UsageError(f"not a cone vertex: {p!r}")

    def distance_table(self):
        """All-pairs BFS distances (computed once, then read-only)."""
        if self._dists is None:
            n = len(self.vertices)
            out = np.full((n, n), -1, dtype=np.int32)
            for s in range(n):
                out[s, s] = 0
                queue = deque([s])
                while queue:
                    u = queue.popleft()
                    for w in self.adjacency[u]:
                        if out[s, w] < 0:
                            out[s, w] = out[s, u] + 1
                            queue.append(w)
            if (out < 0).any():
                raise ModelError("cone graph is not connected",
                                 witness=self.vertices[int(np.argwhere(out < 0)[0][1])])
            self._dists = out
        return self._dists

    def distance(self, x, y):
        table = self.distance_table()
        return float(table[self._index[x], self._index[y]])

    def distance_matrix(self, pts_a, pts_b=None):
        pts_b = pts_a if pts_b is None else pts_b
        table = self.distance_table()
        ia = [self._index[p] for p in pts_a]
        ib = [self._index[p] for p in pts_b]
        return table[np.ix_(ia, ib)].astype(float)

    def enumerate(self, depth):
        return [v for v in self.vertices if v.level <= depth]

    def level_vertices(self, level):
        return [v for v in self.vertices if v.level == level]

    def parent(self, v):
        """Deterministic parent one level up the cone (lowest-index neighbor)."""
        if v.level == 0:
            raise UsageError("the basepoint has no parent")
        iv = self._index[v]
        ups = sorted(w for w in self.adjacency[iv]
                     if self.vertices[w].level == v.level - 1)
        if not ups:
            raise ModelError("vertex has no parent link", witness=v)
        return self.vertices[ups[0]]

    def root_chain(self, v):
        """The vertical chain from the basepoint to v (a geodesic, length = level)."""
        chain = [v]
        while chain[-1].level > 0:
            chain.append(self.parent(chain[-1]))
        return chain[::-1]

    def root_geodesics(self, level=None):
        level = self.max_level if level is None else level
        return [self.root_chain(v) for v in self.level_vertices(level)]

    def geodesic(self, x, y, step):
        if step <= 0:
            raise UsageError("step must be positive")
        table = self.distance_table()
        ix, iy = self._index[x], self._index[y]
        path = [ix]
        while path[-1] != iy:
            u = path[-1]
            path.append(min(w for w in self.adjacency[u]
                            if table[w, iy] == table[u, iy] - 1))
        return [self.vertices[i] for i in path]

    def point_payload(self, p):
        net = self.net_point(p)
        if isinstance(net, CantorPoint):
            net = list(net.bits)
        return {"level": p.level, "index": p.index, "net_point": net}


def build_cone(compact, max_level):
    """Validate the nets and assemble the cone graph."""
    if max_level < 0:
        raise UsageError("max level must be nonnegative")
    compact.validate(max_level)
    return ApproxGraph(compact, max_level)


@dataclass(frozen=True)
class ProductCheckVerdict:
    passed: bool
    worst_gap: float
    worst_pair: tuple
    slack: float


def cone_boundary_product_check(graph, compact, pairs=None, slack=2.0):
    """Deepest-level Gromov products against min(K, log2(1 / d_Z)).

    The cone realizes its boundary with visual parameter 2, so products at
    the basepoint must match the metric logarithm up to a bounded gap.
    """
    top = graph.level_vertices(graph.max_level)
    if pairs is None:
        pairs = [(u, v) for i, u in enumerate(top) for v in top[i:]]
    k = graph.max_level
    worst, worst_pair = -np.inf, None
    for u, v in pairs:
        prod = (graph.distance(u, graph.basepoint) + graph.distance(v, graph.basepoint)
                - graph.distance(u, v)) / 2.0
        dz = compact.metric(graph.net_point(u), graph.net_point(v))
        expected = k if dz == 0 else min(float(k), math.log2(1.0 / dz))
        gap = abs(prod - expected)
        if gap > worst:
            worst, worst_pair = gap, (u, v)
    return ProductCheckVerdict(worst <= slack, worst, worst_pair, slack)


def lift_boundary_map(boundary_fn, source_cone, target_cone):
    """Lift a Lipschitz map of the compacta to the cones, level by level.

    (k, z) goes to (k, nearest level-k target net point to boundary_fn(z));
    nearest-point ties break to the highest net index (dyadic image values sit
    exactly between midpoints, and rounding them all down would starve the
    last cell), and the snap moves the image by at most one mesh, so the lift
    is radial with parameter 1.
    """
    if target_cone.max_level < source_cone.max_level:
        raise UsageError("target cone is too shallow for the lift")

    def fn(v):
        z = boundary_fn(source_cone.net_point(v))
        net = target_cone.nets[v.level]
        j = min(range(len(net)),
                key=lambda i: (target_cone.compact.metric(net[i], z), -i))
        return ConeVertex(v.level, j)

    return SpaceMap(source_cone, target_cone,
                    fn, f"lift-{source_cone.name}-to-{target_cone.name}")


@dataclass(frozen=True)
class EscalationEntry:
    r: float
    b_sup: float | None  # None when no tuple meets the source condition
    witness: tuple | None


def product_escalation_table(space_map, n, r_grid, points=None):
    """For each r: the largest B with an (n+1)-tuple whose pairwise source
    products stay below r while all pairwise image products reach B.

    This is the quantity whose margin over r decides the coarse n-to-1
    property of a radial extension; entries are lower bounds of the true
    supremum (exhaustive over the given points).
    """
    src, tgt = space_map.source, space_map.target
    if points is None:
        points = src.enumerate(getattr(src, "max_level", 0) or 0)
    if n + 1 > len(points):
        return [EscalationEntry(float(r), None, None) for r in r_grid]
    images = [space_map(p) for p in points]
    p_src = _product_matrix(src, points)
    p_img = _product_matrix(tgt, images)
    entries = []
    for r in r_grid:
        allowed = p_src < float(r)
        if n == 1:
            cand = np.where(np.triu(allowed, 1))
            if cand[0].size == 0:
                entries.append(EscalationEntry(float(r), None, None))
                continue
            vals = p_img[cand]
            at = int(np.argmax(vals))
            entries.append(EscalationEntry(
                float(r), float(vals[at]),
                (points[int(cand[0][at])], points[int(cand[1][at])])))
        elif n == 2:
            best, wit = _best_triple_min(allowed, p_img)
            entries.append(EscalationEntry(
                float(r), best, None if wit is None else tuple(points[i] for i in wit)))
        else:
            best, wit = _best_tuple_min_bruteforce(allowed, p_img, n + 1)
            entries.append(EscalationEntry(
                float(r), best, None if wit is None else tuple(points[i] for i in wit)))
    return entries


def _product_matrix(space, points):
    d = space.distance_matrix(points)
    base = space.distance_matrix(points, [space.basepoint])[:, 0]
    return (base[:, None] + base[None, :] - d) / 2.0


def _best_triple_min(allowed, q):
    """Max over allowed triples i<j<k of min pairwise q; None if no triple."""
    m = allowed.shape[0]
    best, wit = None, None
    for i in range(m - 2):
        row = allowed[i]
        pair_ok = np.triu(allowed & row[:, None] & row[None, :], 1)
        pair_ok[:i + 1, :] = False
        if not pair_ok.any():
            continue
        three = np.minimum(np.minimum(q[i][:, None], q[i][None, :]), q)
        masked = np.where(pair_ok, three, -np.inf)
        flat = int(np.argmax(masked))
        j, k = np.unravel_index(flat, masked.shape)
        val = float(masked[j, k])
        if val > -np.inf and (best is None or val > best):
            best, wit = val, (i, int(j), int(k))
    return best, wit


def _best_tuple_min_bruteforce(allowed, q, size):
    import itertools

    m = allowed.shape[0]
    if m > 120:
        raise UsageError("brute-force tuple scan capped at 120 points for n > 2")
    best, wit = None, None
    for combo in itertools.combinations(range(m), size):
        ok = all(allowed[a, b] for a, b in itertools.combinations(combo, 2))
        if not ok:
            continue
        val = min(q[a, b] for a, b in itertools.combinations(combo, 2))
        if best is None or val > best:
            best, wit = float(val), combo
    return best, wit
