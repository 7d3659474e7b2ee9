"""Finite-scale Gromov boundaries.

A truncation at depth k enumerates boundary cells with representative points
and carries their pairwise Gromov products at the basepoint, clipped at k.
A product equal to the depth means "unresolved at this scale", never
equality of cells.  On top of truncations live the U(p, r) membership test,
induced cell maps with well-definedness defects, the (n+1)-tuple test for
n-to-1 boundary behaviour, Hoelder envelope fits, capacity-cover
certificates, and a box-counting dimension estimate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import hyperbolic_plane as plane
from .errors import CoverageError, UnresolvedError, UnsupportedModelError, UsageError
from .free_group_tree import Word, pairwise_word_distances, sphere
from .maps import CantorPoint, cantor_points, sphere_angles
from .metric_core import gromov_product


@dataclass(frozen=True)
class VisualMetricParams:
    """Parameters of a visual metric  K^-(p,q)/C <= d <= C K^-(p,q)."""

    K: float
    C: float = 1.0

    def __post_init__(self):
        if not self.K > 1:
            raise UsageError("visual base K must exceed 1")
        if not self.C >= 1:
            raise UsageError("visual constant C must be at least 1")


def visual_distance(params, product):
    """Canonical visual metric K^-product (the C-sandwich is checked, not built in)."""
    if product < 0:
        raise UsageError("Gromov products are nonnegative")
    return params.K ** (-product)


class BoundaryTruncation:
    """Depth-k boundary cells with clipped pairwise products.

    cells      JSON-able cell payloads, in enumeration order
    reps       representative points (one per cell), in the model's handles
    depth      truncation depth k; products are clipped at k
    model      space model for interior-point queries (None when the cells
               live in a bare metric space, e.g. the Cantor set itself)
    native     optional (d_min, d_max) cell-set distances in the native
               boundary metric, used by covers and box counting
    """

    def __init__(self, label, cells, reps, depth, product_fn, model=None,
                 basepoint=None, native_min=None, native_max=None, angles=None,
                 native_row=None):
        self.label = label
        self.cells = cells
        self.reps = reps
        self.depth = depth
        self.model = model
        self.basepoint = basepoint
        self._product_fn = product_fn
        self._native_min = native_min
        self._native_max = native_max
        self._native_row = native_row
        self.angles = angles
        self._products = None

    def __len__(self):
        return len(self.cells)

    @property
    def products(self):
        """Full clipped product matrix (built once, on demand)."""
        if self._products is None:
            self._products = np.minimum(float(self.depth), self._product_fn())
        return self._products

    def product(self, i, j):
        return float(self.products[i, j])

    def native_min(self, i, j):
        if self._native_min is None:
            raise UnsupportedModelError(f"{self.label}: no native boundary metric")
        return self._native_min(i, j)

    def native_max(self, i, j):
        if self._native_max is None:
            raise UnsupportedModelError(f"{self.label}: no native boundary metric")
        return self._native_max(i, j)

    def native_min_row(self, i):
        if self._native_row is not None:
            return self._native_row(i)
        return np.array([self.native_min(i, j) for j in range(len(self))])

    def adjacency_scale(self):
        """1.5 times the smallest positive native distance: exactly the
        nearest-neighbour band in mesh-like truncations."""
        best = min(self.native_min(0, j) for j in range(1, len(self))
                   if self.native_min(0, j) > 0)
        for i in range(1, min(len(self), 8)):
            for j in range(len(self)):
                d = self.native_min(i, j)
                if 0 < d < best:
                    best = d
        return 1.5 * best

    def adjacent(self, j):
        scale = self.adjacency_scale()
        return [i for i in range(len(self))
                if i != j and self.native_min(i, j) <= scale]

    def to_payload(self):
        return {"label": self.label, "depth": self.depth,
                "cells": list(self.cells),
                "products": [[float(x) for x in row] for row in self.products]}


def tree_truncation(tree, k):
    """Depth-k cells of the 4-regular tree; products are lcp lengths, and the
    native metric is the canonical visual metric with base 2."""
    words = sphere(k)
    cells = [list(w.digits) for w in words]

    def product_fn():
        d = pairwise_word_distances(words)
        lengths = np.array([len(w) for w in words])
        return (lengths[:, None] + lengths[None, :] - d) / 2.0

    trunc = BoundaryTruncation(f"tree-depth-{k}", cells, words, k, product_fn,
                               model=tree, basepoint=tree.basepoint)
    trunc._native_min = lambda i, j: 2.0 ** (-trunc.product(i, j))
    trunc._native_max = trunc._native_min
    return trunc


def circle_truncation(k, plane_model=None):
    """Angular cells of the circle at infinity of the plane, centered at the
    depth-k fan angles; representatives sit at radius k on those spokes."""
    model = plane_model if plane_model is not None else plane.HyperbolicPlane()
    angles = np.sort(np.array([plane.reduce_angle(a) for a in sphere_angles(k)]))
    reps = [plane.PolarPoint(float(k), float(a)) for a in angles]
    cells = [{"angle": float(a)} for a in angles]

    def product_fn():
        d = model.distance_matrix(reps)
        return (2.0 * k - d) / 2.0

    def chord(i, j):
        return float(2.0 * abs(math.sin((angles[i] - angles[j]) / 2.0)))

    def chord_row(i):
        return 2.0 * np.abs(np.sin((angles - angles[i]) / 2.0))

    return BoundaryTruncation(f"circle-depth-{k}", cells, reps, k, product_fn,
                              model=model, basepoint=model.basepoint,
                              native_min=chord, native_max=chord, angles=angles,
                              native_row=chord_row)


def cantor_truncation(k):
    """Depth-k binary cylinders of the Cantor set with the series metric.

    Products are lcp lengths (the visual-base-2 reading of the metric); the
    native cell-set distances add the free-tail term 2^-k on the max side.
    """
    pts = cantor_points(k)
    bits = np.array([p.bits for p in pts], dtype=np.int8)
    weights = 0.5 ** np.arange(1, k + 1)

    def product_fn():
        eq = bits[:, None, :] == bits[None, :, :]
        out = np.zeros((len(pts), len(pts)))
        run = np.ones((len(pts), len(pts)), dtype=bool)
        for lev in range(k):
            run &= eq[:, :, lev]
            out += run
        return out

    def d_min(i, j):
        return float(np.abs(bits[i] - bits[j]) @ weights)

    def d_max(i, j):
        return d_min(i, j) + 2.0 ** (-k)

    def d_row(i):
        return np.abs(bits - bits[i]).astype(float) @ weights

    return BoundaryTruncation(f"cantor-depth-{k}", [list(p.bits) for p in pts],
                              pts, k, product_fn,
                              native_min=d_min, native_max=d_max, native_row=d_row)


def cone_truncation(graph):
    """Deepest-level vertices of a cone graph as boundary cells."""
    k = graph.max_level
    verts = graph.level_vertices(k)

    def product_fn():
        d = graph.distance_matrix(verts)
        base = graph.distance_matrix(verts, [graph.basepoint])[:, 0]
        return (base[:, None] + base[None, :] - d) / 2.0

    compact = graph.compact

    def d_z(i, j):
        return compact.metric(graph.net_point(verts[i]), graph.net_point(verts[j]))

    return BoundaryTruncation(f"{graph.name}-top", [graph.point_payload(v) for v in verts],
                              verts, k, product_fn, model=graph,
                              basepoint=graph.basepoint,
                              native_min=d_z, native_max=d_z)


def u_membership(trunc, p, r, q):
    """Is q in U(cell p, r): does the clipped product reach r?

    p is a cell index; q is a cell index or, when the truncation has a
    model, an interior point of it.  r beyond the truncation depth cannot
    be decided and raises UnresolvedError.
    """
    if r > trunc.depth:
        raise UnresolvedError(f"r={r} exceeds truncation depth {trunc.depth}")
    if isinstance(q, (int, np.integer)):
        return bool(trunc.product(p, int(q)) >= r)
    if trunc.model is None:
        raise UnsupportedModelError(f"{trunc.label}: no interior-point model")
    prod = min(float(trunc.depth),
               gromov_product(trunc.model, trunc.reps[p], q, trunc.basepoint))
    return bool(prod >= r)


# ---------------------------------------------------------------------------
# induced cell maps


@dataclass
class InducedCellMap:
    source: BoundaryTruncation
    target: BoundaryTruncation
    assignment: list  # target cell index per source cell
    achieved: list  # product realized by the classification
    unresolved: list  # source cells whose image is too shallow to classify
    defect: float  # worst same-cell image-product shortfall (0 = well defined)
    defect_witness: tuple | None

    def __call__(self, i):
        return self.assignment[i]

    def surjective(self):
        return len(set(self.assignment)) == len(self.target)

    def image_counts(self):
        counts = [0] * len(self.target)
        for j in self.assignment:
            counts[j] += 1
        return counts

    def multiplicity_up_to_adjacency(self):
        """Max over target cells of the number of source-cell clusters hitting
        the cell or one of its native neighbours.

        Source cells cluster together when their product reaches depth - 1
        (same parent cell), so a cluster stands for one local bundle of rays;
        the count is the finite-scale reading of boundary point-inverses.
        """
        preimages = {}
        for i, j in enumerate(self.assignment):
            preimages.setdefault(j, []).append(i)
        theta = self.source.depth - 1
        worst = 0
        for j in range(len(self.target)):
            hits = list(preimages.get(j, []))
            for nb in self.target.adjacent(j):
                hits.extend(preimages.get(nb, []))
            worst = max(worst, _cluster_count(self.source, sorted(set(hits)), theta))
        return worst


def _cluster_count(trunc, cells, theta):
    if not cells:
        return 0
    remaining = set(cells)
    clusters = 0
    while remaining:
        clusters += 1
        stack = [remaining.pop()]
        while stack:
            a = stack.pop()
            near = [b for b in remaining if trunc.product(a, b) >= theta]
            for b in near:
                remaining.remove(b)
            stack.extend(near)
    return clusters


def induce_boundary_map(space_map, src_trunc, tgt_trunc, rep_sets=None):
    """Classify the image of each source representative into a target cell.

    The assignment maximizes the Gromov product with the target
    representatives (ties to the first cell).  A source cell whose image is
    closer to the target basepoint than the target depth cannot be
    classified at that scale and is reported unresolved.  When `rep_sets`
    supplies extra same-cell representatives, the well-definedness defect is
    the worst shortfall max(0, k' - (f r1, f r2)_b) over same-cell pairs.
    """
    tgt_model = tgt_trunc.model
    if tgt_model is None:
        raise UnsupportedModelError("target truncation has no model")
    b = tgt_trunc.basepoint
    images = [space_map(r) for r in src_trunc.reps]
    image_d = tgt_model.distance_matrix(images, tgt_trunc.reps)
    base_img = tgt_model.distance_matrix(images, [b])[:, 0]
    base_rep = tgt_model.distance_matrix(tgt_trunc.reps, [b])[:, 0]
    prods = (base_img[:, None] + base_rep[None, :] - image_d) / 2.0
    assignment = [int(np.argmax(row)) for row in prods]
    achieved = [float(row[j]) for row, j in zip(prods, assignment)]
    unresolved = [i for i, d in enumerate(base_img) if d < tgt_trunc.depth - 1e-9]

    defect, witness = 0.0, None
    if rep_sets is not None:
        for i, extras in enumerate(rep_sets):
            pts = [space_map(r) for r in extras]
            for a, bpt in itertools.combinations(pts, 2):
                prod = gromov_product(tgt_model, a, bpt, b)
                short = max(0.0, tgt_trunc.depth - prod)
                if short > defect:
                    defect, witness = short, (src_trunc.cells[i], a, bpt)
    return InducedCellMap(src_trunc, tgt_trunc, assignment, achieved,
                          unresolved, defect, witness)


def compose_cell_maps(inner, outer):
    """Cell map of a composition from the two induced cell maps."""
    return [outer.assignment[j] for j in inner.assignment]


# ---------------------------------------------------------------------------
# the (n+1)-tuple boundary test


@dataclass(frozen=True)
class NTo1BoundaryVerdict:
    passed: bool
    n: int
    r: float
    bound: float
    minimal_bound: float | None  # max over tuples of min image pair product
    witness: tuple | None  # tuple realizing minimal_bound
    exhaustive: bool


def _image_products(space_map, src_trunc):
    tgt = space_map.target
    images = [space_map(r) for r in src_trunc.reps]
    d = tgt.distance_matrix(images)
    base = tgt.distance_matrix(images, [tgt.basepoint])[:, 0]
    return (base[:, None] + base[None, :] - d) / 2.0, images


def _circle_fast_best_triple(src_trunc, space_map, r):
    """Exact max-min image product over admissible triples, for maps whose
    images sit at one radius in the plane.

    Sorted by image angle, the outer pair of a triple spanning at most a
    half-turn has the largest angular separation, hence the smallest image
    product, so scanning each left end i outward stops at the first
    admissible partner k (with an admissible middle j).  A triple spanning
    more than a half-turn has some pair at least a third-turn apart, so its
    min product is capped by the third-turn product; the sweep is exact as
    long as its best beats that cap, and reports None otherwise.
    """
    tgt = space_map.target
    images = [space_map(rep) for rep in src_trunc.reps]
    if not all(isinstance(p, plane.PolarPoint) for p in images):
        return None
    radius = images[0].r
    if any(abs(p.r - radius) > 1e-9 for p in images):
        return None
    angs = np.array([plane.reduce_angle(p.phi) for p in images])
    order = np.argsort(angs, kind="stable")
    m = len(order)
    prods = src_trunc.products

    def img_product(a, bidx):
        d = tgt.distance(images[a], images[bidx])
        return (2.0 * radius - d) / 2.0

    best, wit = None, None
    for pos_i in range(m):
        i = int(order[pos_i])
        for span in range(2, m):
            pos_k = (pos_i + span) % m
            k = int(order[pos_k])
            gap = (angs[k] - angs[i]) % (2 * math.pi)
            if gap > math.pi:
                break
            if best is not None and img_product(i, k) <= best:
                break
            if prods[i, k] >= r:
                continue
            mids = [int(order[(pos_i + s) % m]) for s in range(1, span)]
            j = next((j for j in mids if prods[i, j] < r and prods[j, k] < r), None)
            if j is not None:
                val = img_product(i, k)
                if best is None or val > best:
                    best, wit = val, (i, j, k)
                break
    third_turn = (2.0 * radius - tgt.distance(
        plane.PolarPoint(radius, 0.0), plane.PolarPoint(radius, 2 * math.pi / 3))) / 2.0
    if best is not None and best >= third_turn:
        return best, wit
    return None  # wide triples could compete; caller falls back to the cubic scan


def minimal_n_to_1_bound(space_map, src_trunc, n, r):
    """Largest min-pairwise image product over (n+1)-tuples of cells with all
    pairwise source products below r; None when no tuple qualifies.

    Exhaustive; for n = 2 with same-radius plane images a monotone sweep
    replaces the cubic scan.
    """
    prods = src_trunc.products
    if n == 2:
        fast = _circle_fast_best_triple(src_trunc, space_map, r)
        if fast is not None:
            best, wit = fast
            cells = None if wit is None else tuple(src_trunc.cells[i] for i in wit)
            return best, cells
    if len(src_trunc) > 1500:
        raise UsageError("generic tuple scan capped at 1500 cells")
    q, _ = _image_products(space_map, src_trunc)
    allowed = prods < r
    if n == 1:
        cand = np.where(np.triu(allowed, 1))
        if cand[0].size == 0:
            return None, None
        vals = q[cand]
        at = int(np.argmax(vals))
        return float(vals[at]), (src_trunc.cells[int(cand[0][at])],
                                 src_trunc.cells[int(cand[1][at])])
    if n == 2:
        from .hyperbolic_cone import _best_triple_min
        best, wit = _best_triple_min(allowed, q)
        return best, None if wit is None else tuple(src_trunc.cells[i] for i in wit)
    from .hyperbolic_cone import _best_tuple_min_bruteforce
    best, wit = _best_tuple_min_bruteforce(allowed, q, n + 1)
    return best, None if wit is None else tuple(src_trunc.cells[i] for i in wit)


def boundary_n_to_1_check(space_map, src_trunc, n, r, bound):
    """Over all (n+1)-tuples of depth-k cells with pairwise source products
    below r: some image pair product must stay at or below `bound`.

    Returns the verdict together with the minimal admissible bound and the
    tuple realizing it (the counterexample when the check fails).
    """
    best, witness = minimal_n_to_1_bound(space_map, src_trunc, n, r)
    if best is None:
        return NTo1BoundaryVerdict(True, n, float(r), float(bound), None, None, True)
    return NTo1BoundaryVerdict(best <= bound, n, float(r), float(bound),
                               float(best), witness, True)


# ---------------------------------------------------------------------------
# Hoelder envelope between truncations


def holder_fit(assignment, src_trunc, tgt_trunc, grid=None):
    """Envelope B(A) = max over distinct cell pairs of A * (p,q)_src - (gp,gq)_tgt.

    `assignment` maps source cell indices to target cell indices.  Returns
    the admissible frontier [(A, B(A))]; B is clamped at 0.
    """
    if grid is None:
        grid = [round(0.05 * i, 2) for i in range(1, 21)]
    ps = src_trunc.products
    pt = tgt_trunc.products
    n = len(src_trunc)
    idx = np.fromiter((assignment[i] for i in range(n)), dtype=int)
    tgt_prod = pt[np.ix_(idx, idx)]
    iu = np.triu_indices(n, 1)
    src_vals, tgt_vals = ps[iu], tgt_prod[iu]
    frontier = []
    for a in grid:
        b = float(np.max(a * src_vals - tgt_vals, initial=0.0))
        frontier.append((float(a), max(0.0, b)))
    return frontier


# ---------------------------------------------------------------------------
# capacity covers and box dimension


@dataclass(frozen=True)
class CapacityCover:
    """A covering of a truncation by cell sets, claimed c*s-bounded with
    s-multiplicity at most m + 1."""

    members: tuple  # tuple of tuples of cell indices
    s: float
    c: float
    m: int


@dataclass(frozen=True)
class CoverVerdict:
    passed: bool
    worst_diameter: float
    worst_multiplicity: int
    diameter_bound: float


def capacity_cover_check(cover, trunc, tol=1e-12):
    """Exhaustively verify diameters and s-multiplicity of a cover.

    Diameters use the max cell-set distance; a closed s-ball around each
    cell meets a member when the min cell-set distance is at most s.
    """
    covered = set(itertools.chain.from_iterable(cover.members))
    missing = [i for i in range(len(trunc)) if i not in covered]
    if missing:
        raise CoverageError("cover misses cells", witness=trunc.cells[missing[0]])
    worst_diam = 0.0
    for member in cover.members:
        for a, b in itertools.combinations_with_replacement(member, 2):
            worst_diam = max(worst_diam, trunc.native_max(a, b))
    worst_mult = 0
    for center in range(len(trunc)):
        met = sum(1 for member in cover.members
                  if any(trunc.native_min(center, a) <= cover.s + tol for a in member))
        worst_mult = max(worst_mult, met)
    bound = cover.c * cover.s
    return CoverVerdict(worst_diam <= bound + tol and worst_mult <= cover.m + 1,
                        worst_diam, worst_mult, bound)


def cantor_cylinder_cover(trunc, n):
    """The cover of a depth-k Cantor truncation by cylinders fixing the first
    n - 1 coordinates; c s-bounded with s = 2^-(n+1), c = 4, multiplicity 1."""
    members = {}
    for i, cell in enumerate(trunc.cells):
        members.setdefault(tuple(cell[:n - 1]), []).append(i)
    return CapacityCover(tuple(tuple(v) for v in members.values()),
                         s=2.0 ** (-(n + 1)), c=4.0, m=0)


def box_dimension_estimate(trunc, scales):
    """Least-squares slope of log N(s) against log(1/s) with greedy covers.

    N(s) counts greedy centers: scan cells in enumeration order, opening a
    new center whenever a cell lies farther than s from all existing ones.
    """
    scales = sorted(set(float(s) for s in scales), reverse=True)
    if len(scales) < 3 or any(s <= 0 for s in scales):
        raise UsageError("need at least 3 positive scales")
    counts = []
    for s in scales:
        covered = np.zeros(len(trunc), dtype=bool)
        centers = 0
        while not covered.all():
            i = int(np.argmin(covered))
            covered |= trunc.native_min_row(i) <= s
            centers += 1
        counts.append(centers)
    xs = np.log([1.0 / s for s in scales])
    ys = np.log(counts)
    if len(set(counts)) == 1:
        return 0.0 if counts[0] == 1 else float("nan"), 0.0, list(zip(scales, counts))
    coeffs, residuals, *_ = np.polyfit(xs, ys, 1, full=True)
    resid = float(residuals[0]) if len(residuals) else 0.0
    return float(coeffs[0]), resid, list(zip(scales, counts))
