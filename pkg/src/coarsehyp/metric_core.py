"""Based metric spaces, Gromov products, and four-point hyperbolicity estimates.

A space model presents a (possibly infinite) based metric space through a
finite enumeration at a truncation depth, plus distance and geodesic-sampling
services.  All hyperbolicity numbers here are computed from the Gromov
product form of the four-point condition,

    (x,y)_x0 >= min((x,z)_x0, (z,y)_x0) - delta/4,

so ``estimate_delta`` reports 4 times the worst sampled violation.  Sampling
gives a lower bound for any valid delta; it is a certificate only when the
scan is exhaustive over a finite model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .sampling import ExhaustiveSample, SeededSample, materialize_tuples, chunked_max


class SpaceModel:
    """Base class for based metric spaces with a finite point enumeration.

    Subclasses provide ``basepoint``, ``distance``, ``enumerate`` and
    ``geodesic``; they may override ``distance_matrix`` with a vectorized
    version (results must match scalar ``distance`` calls) and
    ``random_points`` for continuous models.
    """

    name = "space"
    geodesic_slack = 1e-9
    visual_constant = None  # None means "not visual"

    @property
    def basepoint(self):
        raise NotImplementedError

    def distance(self, x, y):
        raise NotImplementedError

    def enumerate(self, depth):
        """Deterministic finite point list at truncation depth."""
        raise NotImplementedError

    def geodesic(self, x, y, step):
        raise NotImplementedError

    def check_point(self, p):
        """Raise UsageError if p is not a valid handle for this model."""

    def distance_matrix(self, pts_a, pts_b=None):
        """Pairwise distances as a float array; default is the scalar loop."""
        pts_b = pts_a if pts_b is None else pts_b
        out = np.empty((len(pts_a), len(pts_b)))
        for i, p in enumerate(pts_a):
            for j, q in enumerate(pts_b):
                out[i, j] = self.distance(p, q)
        return out

    def point_payload(self, p):
        """JSON-serializable witness form of a point."""
        return repr(p)


@dataclass(frozen=True)
class HyperbolicityEstimate:
    delta_hat: float
    witness: tuple  # (x, y, z, x0) realizing the worst violation
    exhaustive: bool

    def recheck(self, space):
        """Recompute the violation at the stored witness; must equal delta_hat."""
        x, y, z, x0 = self.witness
        v = min(gromov_product(space, x, z, x0),
                gromov_product(space, z, y, x0)) - gromov_product(space, x, y, x0)
        return 4.0 * max(0.0, v)


@dataclass(frozen=True)
class ShiftVerdict:
    passed: bool
    worst_slack: float
    worst_pair: tuple
    shift_bound: float  # 2 d(a,b)


@dataclass(frozen=True)
class GeodesicProductVerdict:
    passed: bool
    product: float
    min_distance: float  # min over geodesic samples of d(a, .)


def gromov_product(space, x, y, a):
    """(x,y)_a = (d(x,a) + d(y,a) - d(x,y)) / 2; nonnegative by the triangle inequality."""
    for p in (x, y, a):
        space.check_point(p)
    return (space.distance(x, a) + space.distance(y, a) - space.distance(x, y)) / 2


_SLAB_CELL_BUDGET = 16_000_000  # floats per temporary block


def _exhaustive_delta_scan(space, depth):
    """Max violation over all quadruples of the depth enumeration.

    Scan order is x0 outermost, then (x, y, z) in row-major enumeration
    order; the first quadruple attaining the maximum is kept.  The winning
    violation is re-evaluated with scalar distance calls so the reported
    value is reproducible from the witness alone.
    """
    points = space.enumerate(depth)
    if not points:
        raise UsageError("empty enumeration")
    n = len(points)
    dmat = space.distance_matrix(points)
    block = max(1, _SLAB_CELL_BUDGET // (n * n))

    def scan_slab(i0):
        col = dmat[:, i0]
        g = (col[:, None] + col[None, :] - dmat) / 2.0
        best, best_at = -np.inf, None
        buf = np.empty((min(block, n), n, n))
        for x_lo in range(0, n, block):
            x_hi = min(n, x_lo + block)
            viol = buf[:x_hi - x_lo]
            np.minimum(g[x_lo:x_hi, None, :], g[None, :, :], out=viol)
            viol -= g[x_lo:x_hi, :, None]
            flat = int(np.argmax(viol))
            v = float(viol.flat[flat])
            if v > best:
                bx, by, bz = np.unravel_index(flat, (x_hi - x_lo, n, n))
                best, best_at = v, (int(bx) + x_lo, int(by), int(bz))
        return best, (best_at, i0)

    _, payload = chunked_max(scan_slab, list(range(n)))
    (ix, iy, iz), i0 = payload
    return (points[ix], points[iy], points[iz], points[i0])


def _tuple_delta_scan(space, tuples):
    """Locate the worst quadruple in an explicit (x, y, z, x0) list."""
    d = space.distance
    best_v, best_t = -np.inf, None
    for t in tuples:
        x, y, z, x0 = t
        dx0, dy0, dz0 = d(x, x0), d(y, x0), d(z, x0)
        gxz = (dx0 + dz0 - d(x, z)) / 2.0
        gzy = (dz0 + dy0 - d(z, y)) / 2.0
        gxy = (dx0 + dy0 - d(x, y)) / 2.0
        v = min(gxz, gzy) - gxy
        if v > best_v:
            best_v, best_t = v, t
    return best_t


def estimate_delta(space, sample):
    """Estimate delta from below over a quadruple sample.

    `sample` is an ExhaustiveSample, a SeededSample, or an explicit sequence
    of (x, y, z, x0) quadruples.  Returns 4 times the worst violation of the
    delta/4 inequality, clamped at 0.
    """
    if isinstance(sample, ExhaustiveSample):
        witness = _exhaustive_delta_scan(space, sample.depth)
        exhaustive = True
    else:
        tuples, exhaustive = materialize_tuples(space, sample, 4)
        witness = _tuple_delta_scan(space, tuples)
    est = HyperbolicityEstimate(0.0, witness, exhaustive)
    return HyperbolicityEstimate(est.recheck(space), witness, exhaustive)


def check_basepoint_shift(space, pairs, a, b, tol=1e-9):
    """Verify (x,y)_a - 2 d(a,b) <= (x,y)_b <= (x,y)_a + 2 d(a,b) on sampled pairs.

    Returns the worst slack max(|(x,y)_b - (x,y)_a| - 2 d(a,b)); the verdict
    passes when it stays within `tol`.
    """
    space.check_point(a)
    space.check_point(b)
    if not isinstance(pairs, (ExhaustiveSample, SeededSample)):
        pairs = list(pairs)
    tuples, _ = materialize_tuples(space, pairs, 2)
    bound = 2.0 * space.distance(a, b)
    worst, worst_pair = -np.inf, None
    for x, y in tuples:
        ga = gromov_product(space, x, y, a)
        gb = gromov_product(space, x, y, b)
        slack = abs(gb - ga) - bound
        if slack > worst:
            worst, worst_pair = slack, (x, y)
    return ShiftVerdict(worst <= tol, worst, worst_pair, bound)


def product_vs_geodesic(space, a, b, c, step=0.25, tol=1e-9):
    """Check (b,c)_a <= min over geodesic samples p of d(a,p), up to slack.

    Needs the model's geodesic sampler; on models without one this raises
    UnsupportedModelError (from the model itself).
    """
    product = gromov_product(space, b, c, a)
    samples = space.geodesic(b, c, step)
    min_dist = min(space.distance(a, p) for p in samples)
    passed = product <= min_dist + space.geodesic_slack + tol
    return GeodesicProductVerdict(passed, product, min_dist)
