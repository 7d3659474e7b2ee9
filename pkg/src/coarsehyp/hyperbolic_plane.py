"""The hyperbolic plane in geodesic polar coordinates about a basepoint.

Distances use the hyperbolic law of cosines,

    cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(phi1 - phi2),

so the radial primitives A(r, phi), B(r, phi) and the unit segment between
them are native.  Angles are stored unreduced (cumulative sums stay exact);
reduction mod 2*pi happens only on comparison and rendering.  Geodesics are
sampled by interpolating in the hyperboloid model and re-expressing the
samples in polar coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .metric_core import SpaceModel

TWO_PI = 2.0 * math.pi


def reduce_angle(phi):
    """Canonical representative of phi in [0, 2*pi)."""
    out = math.fmod(phi, TWO_PI)
    return out + TWO_PI if out < 0.0 else out


@dataclass(frozen=True, eq=False)
class PolarPoint:
    r: float
    phi: float

    def __eq__(self, other):
        if not isinstance(other, PolarPoint):
            return NotImplemented
        if self.r == 0.0 and other.r == 0.0:
            return True  # the basepoint carries no angle
        return self.r == other.r and reduce_angle(self.phi) == reduce_angle(other.phi)

    def __hash__(self):
        if self.r == 0.0:
            return hash(0.0)
        return hash((self.r, reduce_angle(self.phi)))


BASEPOINT = PolarPoint(0.0, 0.0)


def distance(p, q):
    """Hyperbolic distance between two polar points.

    Uses the half-distance form sinh^2(d/2) = sinh^2(dr/2) + sinh r1 sinh r2
    sin^2(dphi/2): every term is nonnegative, so coincident and nearby points
    come out exact where the raw law of cosines loses half its digits to the
    acosh-near-1 cliff.
    """
    half = math.sinh((p.r - q.r) / 2.0) ** 2 \
        + math.sinh(p.r) * math.sinh(q.r) * math.sin((p.phi - q.phi) / 2.0) ** 2
    return 2.0 * math.asinh(math.sqrt(half))


def point_A(r, phi):
    """Point at distance r from the basepoint on the ray at angle phi."""
    if r < 0:
        raise UsageError("radius must be nonnegative")
    return PolarPoint(float(r), float(phi))


def point_B(r, phi):
    """Point at distance r + 1 from the basepoint on the ray at angle phi."""
    if r < 0:
        raise UsageError("radius must be nonnegative")
    return PolarPoint(float(r) + 1.0, float(phi))


def segment_l(r, phi, t):
    """Arc-length point on the radial unit segment from A(r,phi) to B(r,phi)."""
    if r < 0:
        raise UsageError("radius must be nonnegative")
    if not 0.0 <= t <= 1.0:
        raise UsageError("segment parameter must lie in [0, 1]")
    return PolarPoint(float(r) + float(t), float(phi))


def circumference(n):
    """Length of the circle of hyperbolic radius n: 2*pi*sinh(n)."""
    return TWO_PI * math.sinh(n)


def _clamp(x):
    return max(-1.0, min(1.0, x))


def geodesic_point(p, q, s):
    """Point at arc length s from p along the geodesic towards q.

    Solved through hyperbolic triangles with the basepoint as the third
    vertex: the angle at p towards the basepoint is shared by every point of
    the segment, which gives the radius of the result, and the angle opened
    at the basepoint gives its spoke.  No tangent normalization, so there is
    no cancellation cliff on long geodesics; the residual rounding error is
    of order cosh(r_p + s) * eps in the radius' cosh.
    """
    d = distance(p, q)
    if d == 0.0 or s == 0.0:
        return p
    if s == d:
        return q
    if p.r == 0.0:
        return PolarPoint(s, q.phi)
    dphi = math.fmod(q.phi - p.phi, TWO_PI)
    if dphi > math.pi:
        dphi -= TWO_PI
    elif dphi <= -math.pi:
        dphi += TWO_PI
    if q.r == 0.0 or dphi == 0.0 or abs(dphi) == math.pi:
        # collinear through the basepoint: stay on the line exactly
        xq = q.r if dphi == 0.0 else -q.r
        x = p.r + (1.0 if xq > p.r else -1.0) * s
        return PolarPoint(abs(x), p.phi if x >= 0 else p.phi + math.pi)
    cos_at_p = _clamp((math.cosh(p.r) * math.cosh(d) - math.cosh(q.r))
                      / (math.sinh(p.r) * math.sinh(d)))
    ch_rx = (math.cosh(p.r) * math.cosh(s)
             - math.sinh(p.r) * math.sinh(s) * cos_at_p)
    r_x = math.acosh(max(1.0, ch_rx))
    if r_x == 0.0:
        return PolarPoint(0.0, 0.0)
    spread = _clamp((math.cosh(p.r) * ch_rx - math.cosh(s))
                    / (math.sinh(p.r) * math.sinh(r_x)))
    delta = math.acos(spread)
    sign = 1.0 if dphi >= 0.0 else -1.0
    return PolarPoint(r_x, p.phi + sign * delta)


def geodesic(p, q, step):
    """Sample the geodesic from p to q at arc-length spacing <= step;
    endpoints included."""
    if step <= 0:
        raise UsageError("step must be positive")
    d = distance(p, q)
    if d == 0.0:
        return [p, q]
    n = max(1, math.ceil(d / step))
    out = [p]
    out.extend(geodesic_point(p, q, d * i / n) for i in range(1, n))
    out.append(q)
    return out


class HyperbolicPlane(SpaceModel):
    """Plane model; `enumerate(depth)` is a deterministic polar grid of the
    radius-`depth` ball (rings at unit radii, roughly unit arc spacing)."""

    name = "plane"
    geodesic_slack = 1e-9
    visual_constant = 0.0  # every point lies on a ray from the basepoint

    def __init__(self, ring_spacing=1.0):
        self.ring_spacing = ring_spacing

    @property
    def basepoint(self):
        return BASEPOINT

    def distance(self, x, y):
        return distance(x, y)

    def check_point(self, p):
        if not isinstance(p, PolarPoint) or p.r < 0 or not math.isfinite(p.r):
            raise UsageError(f"not a plane point: {p!r}")

    def enumerate(self, depth):
        points = [BASEPOINT]
        for k in range(1, int(depth) + 1):
            m = max(8, math.ceil(circumference(k) / self.ring_spacing))
            points.extend(PolarPoint(float(k), TWO_PI * j / m) for j in range(m))
        return points

    def random_points(self, count, depth, rng):
        """Area-uniform sample of the radius-`depth` ball."""
        u = rng.random(count)
        r = np.arccosh(1.0 + u * (math.cosh(depth) - 1.0))
        phi = rng.random(count) * TWO_PI
        return [PolarPoint(float(ri), float(pi)) for ri, pi in zip(r, phi)]

    def geodesic(self, x, y, step):
        return geodesic(x, y, step)

    def distance_matrix(self, pts_a, pts_b=None):
        pts_b = pts_a if pts_b is None else pts_b
        ra = np.array([p.r for p in pts_a])
        pa = np.array([p.phi for p in pts_a])
        rb = np.array([p.r for p in pts_b])
        pb = np.array([p.phi for p in pts_b])
        half = (np.sinh((ra[:, None] - rb[None, :]) / 2.0) ** 2
                + np.sinh(ra)[:, None] * np.sinh(rb)[None, :]
                * np.sin((pa[:, None] - pb[None, :]) / 2.0) ** 2)
        return 2.0 * np.arcsinh(np.sqrt(half))

    def point_payload(self, p):
        return {"r": p.r, "phi": p.phi}
