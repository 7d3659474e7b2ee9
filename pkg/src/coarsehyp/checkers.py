"""Decision procedures for the function classes, as finite-sample verdicts.

Every fit is an envelope over an explicit grid: the paper-style constants
are existential, so any admissible pair certifies class membership, and the
returned constants re-verify against every sampled tuple with no tolerance
beyond 1e-9.  Verdicts computed from exhaustive enumerations are marked so;
sampled ones carry a flag and never feed acceptance checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

DEFAULT_GRID = tuple(round(0.05 * i, 2) for i in range(1, 21))  # 0.05 .. 1.00
DEFAULT_LSL_GRID = tuple(round(1.0 + 0.1 * i, 2) for i in range(21))  # 1.0 .. 3.0


def _source_target_matrices(space_map, points):
    images = [space_map(p) for p in points]
    ds = space_map.source.distance_matrix(points)
    dt = space_map.target.distance_matrix(images)
    return ds, dt, images


# ---------------------------------------------------------------------------
# large scale Lipschitz


@dataclass(frozen=True)
class LslFit:
    lambda1: float
    mu1: float
    worst_pair: tuple
    envelope: tuple  # ((lambda, mu), ...) over the grid
    passed: bool

    def mu_for(self, lam):
        for g, mu in self.envelope:
            if g == lam:
                return mu
        raise UsageError(f"lambda {lam} not in the fitted grid")


def _snap(value, tol):
    """Envelope offsets within the float tolerance of 0 are 0."""
    return 0.0 if value <= tol else value


def fit_lsl(space_map, points, lambda_grid=None, mu_ceiling=None, tol=1e-9):
    """Upper envelope mu1(lambda1) = max d(fx,fy) - lambda1 d(x,y) over all
    point pairs; returns the grid-minimal admissible pair, lexicographic in
    (lambda1, mu1)."""
    if not points:
        raise UsageError("empty sample")
    grid = tuple(lambda_grid) if lambda_grid is not None else DEFAULT_LSL_GRID
    ds, dt, _ = _source_target_matrices(space_map, points)
    iu = np.triu_indices(len(points), 1)
    s, t = ds[iu], dt[iu]
    envelope = []
    for lam in grid:
        envelope.append((float(lam),
                         _snap(float(np.max(t - lam * s, initial=0.0)), tol)))
    chosen = next(((lam, mu) for lam, mu in envelope
                   if mu_ceiling is None or mu <= mu_ceiling), None)
    lam, mu = chosen if chosen else envelope[-1]
    at = int(np.argmax(t - lam * s)) if s.size else 0
    worst = (points[int(iu[0][at])], points[int(iu[1][at])]) if s.size else None
    return LslFit(lam, mu, worst, tuple(envelope), chosen is not None)


# ---------------------------------------------------------------------------
# radial lower bound along root geodesics


@dataclass(frozen=True)
class RadialFit:
    lambda2: float
    mu2: float
    basepoint: object
    worst_pair: tuple
    envelope: tuple
    passed: bool

    def mu_for(self, lam):
        for g, mu in self.envelope:
            if g == lam:
                return mu
        raise UsageError(f"lambda {lam} not in the fitted grid")


def geodesic_pairs(family):
    """Unique ordered point pairs lying on a common geodesic of the family."""
    seen = set()
    pairs = []
    for chain in family:
        for i in range(len(chain)):
            for j in range(i + 1, len(chain)):
                key = (chain[i], chain[j])
                if key not in seen:
                    seen.add(key)
                    pairs.append(key)
    return pairs


def fit_radial(space_map, family, lambda_grid=None, tol=1e-9):
    """Lower envelope mu2(lambda2) = max lambda2 d(x,y) - d(fx,fy) over pairs
    on common root geodesics.

    The verdict fails when every grid lambda2 needs mu2 beyond a quarter of
    its stretch of the longest sampled distance: that is the signature of a
    lower bound degrading with geodesic length instead of staying bounded
    (a constant map, or the comb over its full finite-geodesic family), as
    opposed to a true radial envelope.
    """
    if not family:
        raise UsageError("empty geodesic family")
    grid = tuple(lambda_grid) if lambda_grid is not None else DEFAULT_GRID
    pairs = geodesic_pairs(family)
    if not pairs:
        raise UsageError("family has no point pairs")
    src, tgt = space_map.source, space_map.target
    imgs = {}
    for chain in family:
        for p in chain:
            if p not in imgs:
                imgs[p] = space_map(p)
    ds = np.array([src.distance(x, y) for x, y in pairs])
    dt = np.array([tgt.distance(imgs[x], imgs[y]) for x, y in pairs])
    dmax = float(np.max(ds))
    envelope = []
    admissible = []
    for lam in grid:
        mu = _snap(max(0.0, float(np.max(lam * ds - dt))), tol)
        envelope.append((float(lam), mu))
        if mu <= lam * dmax / 4.0:
            admissible.append((float(lam), mu))
    if admissible:
        lam, mu = max(admissible, key=lambda e: (e[0], -e[1]))
        passed = True
    else:
        lam, mu = envelope[-1]
        passed = False
    at = int(np.argmax(lam * ds - dt))
    basepoint = family[0][0]
    return RadialFit(lam, mu, basepoint, pairs[at], tuple(envelope), passed)


@dataclass(frozen=True)
class IndependenceVerdict:
    passed: bool
    fits: dict
    failing: object  # first basepoint whose refit failed, or None


def check_radial_basepoint_independence(space_map, families, lambda_grid=None):
    """Refit the radial envelope from several basepoints; radiality must
    survive each change of basepoint.  `families` maps basepoint -> root
    geodesic family at that basepoint."""
    if len(families) < 2:
        raise UsageError("need at least two basepoints")
    fits, failing = {}, None
    for base, family in families.items():
        fit = fit_radial(space_map, family, lambda_grid)
        fits[base] = fit
        if not fit.passed and failing is None:
            failing = base
    return IndependenceVerdict(failing is None, fits, failing)


# ---------------------------------------------------------------------------
# visual modulus


@dataclass(frozen=True)
class VisualModulus:
    table: tuple  # ((r, s(r)), ...) monotone nondecreasing
    violations: tuple  # pairs with image product <= r but source product >= ceiling
    ceiling: float
    passed: bool


def check_visual(space_map, points, r_grid, s_ceiling):
    """For each r: s(r) = 1 + max source product among pairs whose image
    product is at most r.  A finite monotone table within the ceiling attests
    the visual property at this scale; pairs pushing past the ceiling are the
    violation witnesses."""
    if not points:
        raise UsageError("empty sample")
    src, tgt = space_map.source, space_map.target
    a = src.basepoint
    b = space_map(a)
    images = [space_map(p) for p in points]
    ds = src.distance_matrix(points)
    da = src.distance_matrix(points, [a])[:, 0]
    dt = tgt.distance_matrix(images)
    db = tgt.distance_matrix(images, [b])[:, 0]
    gs = (da[:, None] + da[None, :] - ds) / 2.0
    gt = (db[:, None] + db[None, :] - dt) / 2.0
    iu = np.triu_indices(len(points), 1)
    gs, gt = gs[iu], gt[iu]
    table = []
    violations = []
    for r in r_grid:
        mask = gt <= r
        s = 1.0 + (float(np.max(gs[mask])) if mask.any() else 0.0)
        table.append((float(r), s))
        if s > s_ceiling:
            bad = mask & (gs >= s_ceiling)
            for at in np.nonzero(bad)[0][:8]:
                violations.append((points[int(iu[0][at])], points[int(iu[1][at])],
                                   float(gs[at]), float(gt[at])))
    return VisualModulus(tuple(table), tuple(violations), float(s_ceiling),
                         all(s <= s_ceiling for _, s in table))


# ---------------------------------------------------------------------------
# coarse surjectivity


@dataclass(frozen=True)
class SurjectivityVerdict:
    s_dense: float
    worst_target: object
    ceiling: float
    passed: bool


def check_coarse_surjectivity(space_map, targets, source_points, ceiling):
    """S = max over the target sample of the distance to the image set."""
    if not targets or not source_points:
        raise UsageError("empty sample")
    tgt = space_map.target
    images = [space_map(p) for p in source_points]
    worst, worst_t = -1.0, None
    for lo in range(0, len(targets), 256):
        chunk = targets[lo:lo + 256]
        d = tgt.distance_matrix(chunk, images)
        best = d.min(axis=1)
        at = int(np.argmax(best))
        if best[at] > worst:
            worst, worst_t = float(best[at]), chunk[at]
    return SurjectivityVerdict(worst, worst_t, float(ceiling), worst <= ceiling)


# ---------------------------------------------------------------------------
# coarse n-to-1


@dataclass(frozen=True)
class NTo1Table:
    n: int
    table: tuple  # ((R, S or None), ...)
    witnesses: dict  # R -> bad tuple at the last failing S (minimality witness)
    counterexample: tuple | None  # (R, bad tuple at grid max) when no S works
    exhaustive: bool
    passed: bool


def _bad_tuple(ds, dt, n, s, r):
    """A (n+1)-tuple pairwise farther than s whose images stay R-close, or None."""
    allowed = (ds > s) & (dt <= r)
    np.fill_diagonal(allowed, False)
    if n == 1:
        hit = np.argwhere(allowed)
        return tuple(int(v) for v in hit[0]) if hit.size else None
    if n == 2:
        a = allowed.astype(np.float32)
        two = a @ a
        tri = np.argwhere((two > 0) & allowed)
        if not tri.size:
            return None
        i, j = (int(v) for v in tri[0])
        k = int(np.nonzero(allowed[i] & allowed[j])[0][0])
        return (i, k, j)
    m = allowed.shape[0]
    if m > 120:
        raise UsageError("exhaustive tuple scan for n > 2 capped at 120 points")
    for combo in itertools.combinations(range(m), n + 1):
        if all(allowed[x, y] for x, y in itertools.combinations(combo, 2)):
            return combo
    return None


def check_coarsely_n_to_1(space_map, n, r_grid, points, s_grid=None):
    """For each R: the minimal grid S such that any (n+1)-tuple pairwise
    farther than S has an image pair farther than R.

    Exhaustive over `points`.  S(R) is monotone, so the scan resumes at the
    previous level; the bad tuple found at S-1 witnesses minimality.
    """
    if not points:
        raise UsageError("empty sample")
    ds, dt, _ = _source_target_matrices(space_map, points)
    if s_grid is None:
        s_grid = list(range(1, int(np.max(ds)) + 2))
    s_grid = sorted(s_grid)
    table, witnesses, counterexample = [], {}, None
    start = 0
    for r in sorted(r_grid):
        found = None
        for idx in range(start, len(s_grid)):
            bad = _bad_tuple(ds, dt, n, s_grid[idx], r)
            if bad is None:
                found = idx
                break
            witnesses[float(r)] = tuple(points[i] for i in bad)
        if found is None:
            counterexample = (float(r), witnesses.get(float(r)))
            table.append((float(r), None))
        else:
            start = found
            table.append((float(r), float(s_grid[found])))
    return NTo1Table(n, tuple(table), witnesses, counterexample, True,
                     counterexample is None)


# ---------------------------------------------------------------------------
# stability of pointed rays


@dataclass(frozen=True)
class StabilityReport:
    h_bound: float
    worst_ray: tuple
    by_length: tuple  # ((ray length, max H at that length), ...)


def hausdorff_distance(model, set_a, set_b):
    d = model.distance_matrix(set_a, set_b)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def check_ray_stability(space_map, rays, step=0.25):
    """Hausdorff distance between the image of each root geodesic and the
    target geodesic joining its endpoints' images."""
    if not rays:
        raise UsageError("empty ray family")
    tgt = space_map.target
    worst, worst_ray = -1.0, None
    by_length = {}
    for ray in rays:
        imgs = [space_map(p) for p in ray]
        geo = tgt.geodesic(imgs[0], imgs[-1], step)
        h = hausdorff_distance(tgt, imgs, geo)
        key = len(ray) - 1
        by_length[key] = max(by_length.get(key, 0.0), h)
        if h > worst:
            worst, worst_ray = h, ray
    return StabilityReport(worst, tuple(worst_ray), tuple(sorted(by_length.items())))


# ---------------------------------------------------------------------------
# product lower bound (the boundary-Hoelder source inequality)


@dataclass(frozen=True)
class ProductBoundFit:
    a_coeff: float
    b_offset: float
    frontier: tuple
    worst_pair: tuple

    def b_for(self, a):
        for g, b in self.frontier:
            if g == a:
                return b
        raise UsageError(f"coefficient {a} not in the fitted grid")


def fit_product_lower_bound(space_map, points, grid=None):
    """Envelope B(A) = max over pairs of A (x,y)_a - (fx,fy)_fa, clamped at 0;
    certifies (fx,fy)_fa >= A (x,y)_a - B on the sample."""
    if not points:
        raise UsageError("empty sample")
    grid = tuple(grid) if grid is not None else DEFAULT_GRID
    src, tgt = space_map.source, space_map.target
    a = src.basepoint
    b = space_map(a)
    images = [space_map(p) for p in points]
    ds = src.distance_matrix(points)
    da = src.distance_matrix(points, [a])[:, 0]
    dt = tgt.distance_matrix(images)
    db = tgt.distance_matrix(images, [b])[:, 0]
    gs = (da[:, None] + da[None, :] - ds) / 2.0
    gt = (db[:, None] + db[None, :] - dt) / 2.0
    iu = np.triu_indices(len(points), 1)
    gs, gt = gs[iu], gt[iu]
    frontier = tuple((float(ac), max(0.0, float(np.max(ac * gs - gt, initial=0.0))))
                     for ac in grid)
    a_coeff, b_offset = frontier[-1]
    at = int(np.argmax(a_coeff * gs - gt)) if gs.size else 0
    worst = (points[int(iu[0][at])], points[int(iu[1][at])]) if gs.size else None
    return ProductBoundFit(a_coeff, b_offset, frontier, worst)
