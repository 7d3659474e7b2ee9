"""Concrete maps between the models.

* the fan map sending the 4-regular tree onto radial spokes of the plane
  (depth-n vertices to radius n, subtrees fanning into thirds of the parent
  spoke's angular slot),
* the binary-expansion map from the Cantor set to the unit interval,
* radial extensions of boundary maps, and
* the comb tree whose 1-Lipschitz embedding into the plane is radial along
  its single ray yet not visual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import hyperbolic_plane as plane
from .errors import ModelError, UsageError
from .free_group_tree import E, EdgePoint, Word, path_vertices, sphere, word_distance
from .hyperbolic_plane import BASEPOINT, PolarPoint
from .metric_core import SpaceModel


@dataclass(frozen=True)
class SpaceMap:
    """A function between two space models, as handed to the checkers."""

    source: object
    target: object
    fn: object
    name: str

    def __call__(self, p):
        return self.fn(p)


# ---------------------------------------------------------------------------
# the tree -> plane fan map


def vertex_angle(w):
    """Spoke angle of a vertex: a1 * pi/2, then each later digit a_m under a
    parent at depth n shifts by (a_m - 1) * (pi/6) * 3^-(n-1)."""
    if not w.digits:
        raise UsageError("the basepoint has no angle")
    angle = w.digits[0] * (math.pi / 2.0)
    for m, a in enumerate(w.digits[1:], start=2):
        parent_depth = m - 1
        angle += (a - 1) * (math.pi / 6.0) * 3.0 ** (-(parent_depth - 1))
    return angle


@lru_cache(maxsize=16)
def sphere_angles(n):
    """Angles of all depth-n vertices, in sphere(n) order (cached once per depth)."""
    return tuple(vertex_angle(w) for w in sphere(n))


def map_vertex(w):
    """Vertex at depth n goes to the polar point (n, vertex_angle(w))."""
    if not w.digits:
        return BASEPOINT
    return PolarPoint(float(len(w)), vertex_angle(w))


def map_edge_point(p):
    """Edge (w -> w.child) at parameter t goes to radius |w| + t on the child's
    spoke; the shared endpoint t = 0 keeps the parent's angle (the edge image
    is half-open, which is where the jump discontinuities live)."""
    if p.t == 0.0:
        return map_vertex(p.parent)
    return PolarPoint(len(p.parent) + p.t, vertex_angle(p.child))


def jump_bound(n):
    """Circle length at radius n over the number of depth-n spokes:
    2 pi sinh(n) / (4 * 3^(n-1))."""
    if n < 1:
        raise UsageError("jump index must be >= 1")
    return plane.circumference(n) / (4 * 3 ** (n - 1))


def measured_jump(n):
    """Worst one-sided discontinuity at radius n: the plane distance between
    edge-image limits of angle-adjacent siblings, scanned exhaustively over
    all depth-(n+1) sibling triples."""
    if n < 1:
        raise UsageError("jump index must be >= 1")
    worst = 0.0
    for w in sphere(n):
        angles = sorted(vertex_angle(w.child(a)) for a in range(3))
        for lo, hi in zip(angles, angles[1:]):
            d = plane.distance(PolarPoint(float(n), lo), PolarPoint(float(n), hi))
            worst = max(worst, d)
    return worst


def tree_fan_map(tree, target=None):
    """The fan map as a SpaceMap (accepts vertices and edge points)."""
    target = target if target is not None else plane.HyperbolicPlane()

    def fn(p):
        return map_vertex(p) if isinstance(p, Word) else map_edge_point(p)

    return SpaceMap(tree, target, fn, "tree_fan")


# ---------------------------------------------------------------------------
# Cantor set -> interval


@dataclass(frozen=True)
class CantorPoint:
    """Depth-k point of the binary Cantor set with metric sum |x_i - y_i| / 2^i."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise UsageError(f"bits must be 0/1: {self.bits}")


def cantor_distance(x, y):
    """Product metric; finite points stand for their all-zeros extension."""
    n = max(len(x.bits), len(y.bits))
    xb = x.bits + (0,) * (n - len(x.bits))
    yb = y.bits + (0,) * (n - len(y.bits))
    return sum(abs(a - b) / 2.0 ** i for i, (a, b) in enumerate(zip(xb, yb), start=1))


def cantor_map(x):
    """Binary expansion value sum bits_i / 2^i; 1-Lipschitz for the product metric."""
    return sum(b / 2.0 ** i for i, b in enumerate(x.bits, start=1))


def cantor_points(depth):
    """All depth-`depth` Cantor points in lexicographic order."""
    out = [CantorPoint(())]
    for _ in range(depth):
        out = [CantorPoint(p.bits + (b,)) for p in out for b in (0, 1)]
    return out


# ---------------------------------------------------------------------------
# radial extension of a boundary map


@dataclass(frozen=True)
class RadialExtensionSpec:
    """Data of a radial extension: a cell map between truncated boundaries,
    the stretch parameter, and per-model ray services.

    ``source_ray_cell(x)`` names the boundary cell of a ray through x (in tree
    and cone models every point lies on a ray from the basepoint, so the
    maximal-finite-ray fallback of the general definition degenerates to the
    on-a-ray clause), and ``target_ray_point(cell, s)`` returns the point at
    parameter s on the target ray of that cell, snapping to the nearest
    enumerated point in graph targets (snap error <= 1/2 edge).
    """

    boundary_map: dict
    parameter_a: float
    source_ray_cell: object
    target_ray_point: object
    basepoint_image: object


def radial_extension(spec, space, x):
    """Image of x: basepoint to basepoint image, otherwise the point at
    parameter A * d(basepoint, x) on the image ray of x's cell."""
    if spec.parameter_a <= 0:
        raise UsageError("extension parameter must be positive")
    t = space.distance(space.basepoint, x)
    if t == 0.0:
        return spec.basepoint_image
    cell = spec.source_ray_cell(x)
    if cell is None:
        raise ModelError("point lies on no enumerated ray", witness=x)
    return spec.target_ray_point(spec.boundary_map[cell], spec.parameter_a * t)


# ---------------------------------------------------------------------------
# the comb tree and its plane embedding


@dataclass(frozen=True)
class CombVertex:
    """(n, 0) is spine vertex n; (n, j) with j >= 1 is the j-th vertex of tooth n."""

    spine: int
    tooth: int = 0

    def __repr__(self):
        return f"s{self.spine}" if self.tooth == 0 else f"t{self.spine}.{self.tooth}"


class CombTree(SpaceModel):
    """Spine of length N with tooth n attached at spine vertex n, the tooth
    length being the rounded plane distance between (n, 0) and (n, pi/2).

    The comb is a unit-edge tree; only the spine extends to infinity, so the
    model is not visual (teeth endpoints sit far from the single ray).
    """

    name = "comb"
    geodesic_slack = 0.0
    visual_constant = None

    def __init__(self, spine_length):
        if spine_length < 2:
            raise UsageError("spine length must be >= 2")
        self.spine_length = spine_length
        self.tooth_span = {
            n: plane.distance(PolarPoint(float(n), 0.0), PolarPoint(float(n), math.pi / 2))
            for n in range(1, spine_length + 1)
        }
        self.tooth_length = {n: max(1, round(s)) for n, s in self.tooth_span.items()}

    @property
    def basepoint(self):
        return CombVertex(0, 0)

    def check_point(self, p):
        if not isinstance(p, CombVertex) or not 0 <= p.spine <= self.spine_length:
            raise UsageError(f"not a comb vertex: {p!r}")
        if p.tooth and (p.spine == 0 or p.tooth > self.tooth_length[p.spine]):
            raise UsageError(f"not a comb vertex: {p!r}")

    def distance(self, x, y):
        if x.spine == y.spine and x.tooth and y.tooth:
            return float(abs(x.tooth - y.tooth))
        return float(x.tooth + abs(x.spine - y.spine) + y.tooth)

    def enumerate(self, depth):
        out = [CombVertex(n, 0) for n in range(self.spine_length + 1)]
        for n in range(1, self.spine_length + 1):
            out.extend(CombVertex(n, j) for j in range(1, self.tooth_length[n] + 1))
        return [p for p in out if self.distance(self.basepoint, p) <= depth]

    def geodesic(self, x, y, step):
        if step <= 0:
            raise UsageError("step must be positive")
        if x.spine == y.spine and x.tooth and y.tooth:
            sgn = 1 if y.tooth >= x.tooth else -1
            return [CombVertex(x.spine, j) for j in range(x.tooth, y.tooth + sgn, sgn)]
        down = [CombVertex(x.spine, j) for j in range(x.tooth, 0, -1)]
        sgn = 1 if y.spine >= x.spine else -1
        spine = [CombVertex(s, 0) for s in range(x.spine, y.spine + sgn, sgn)]
        up = [CombVertex(y.spine, j) for j in range(1, y.tooth + 1)]
        return down + spine + up

    def spine_ray(self):
        return [CombVertex(n, 0) for n in range(self.spine_length + 1)]

    def root_geodesics(self):
        """All maximal geodesics from the root: the spine, and root-to-tooth-end paths."""
        out = [self.spine_ray()]
        for n in range(1, self.spine_length + 1):
            out.append([CombVertex(s, 0) for s in range(n + 1)]
                       + [CombVertex(n, j) for j in range(1, self.tooth_length[n] + 1)])
        return out

    def point_payload(self, p):
        return {"spine": p.spine, "tooth": p.tooth}


def comb_counterexample(spine_length):
    """The comb and its 1-Lipschitz plane embedding.

    The spine goes isometrically onto the angle-0 ray; tooth n runs along the
    geodesic from (n, 0) to (n, pi/2) by arc length, clamped at the far end,
    so each tooth map is 1-Lipschitz exactly and the tooth endpoint lands
    within the rounding defect (<= 1/2) of (n, pi/2).
    """
    comb = CombTree(spine_length)
    target = plane.HyperbolicPlane()

    def fn(p):
        if p.tooth == 0:
            return PolarPoint(float(p.spine), 0.0)
        n = p.spine
        s = min(float(p.tooth), comb.tooth_span[n])
        return plane.geodesic_point(PolarPoint(float(n), 0.0),
                                    PolarPoint(float(n), math.pi / 2), s)

    return comb, SpaceMap(comb, target, fn, "comb")
