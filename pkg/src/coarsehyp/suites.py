"""Named verification suites assembling checker verdicts into reports.

Each suite is deterministic given its config: exhaustive scans everywhere,
seeded generators for the few sampled estimates.  Regression constants
pinned from the first run live next to the checks that reproduce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import boundary, checkers, maps, render
from .errors import UsageError
from .free_group_tree import E, FreeGroupTree, Word, ball, path_vertices, sphere
from .hyperbolic_cone import (CantorModel, IntervalModel, build_cone,
                              cone_boundary_product_check, lift_boundary_map,
                              load_compact_model, product_escalation_table)
from .hyperbolic_plane import HyperbolicPlane, PolarPoint
from .maps import (cantor_map, cantor_points, comb_counterexample, jump_bound,
                   measured_jump, sphere_angles, tree_fan_map)
from .metric_core import ExhaustiveSample, estimate_delta
from .report import PropertyReport, Verdict
from .sampling import SeededSample


@dataclass
class RunConfig:
    suite: str = ""
    depth: int = 7
    levels: int = 8
    samples: int = 100_000
    seed: int = 7
    tolerance: float = 1e-9
    out: str | None = None
    no_timestamp: bool = False
    model: str | None = None  # compact-model JSON for cone suites

    def payload(self):
        return {"suite": self.suite, "depth": self.depth, "levels": self.levels,
                "samples": self.samples, "seed": self.seed,
                "tolerance": self.tolerance, "model": self.model}


def tree_root_geodesics(tree, depth, base=None):
    """Geodesics from `base` (default the root) to every depth-`depth` vertex."""
    base = base if base is not None else tree.basepoint
    return [path_vertices(base, w) for w in sphere(depth)]


def _witness(model, pts):
    return [model.point_payload(p) for p in pts]


# ---------------------------------------------------------------------------
# the tree -> plane suite


def verify_example8(cfg):
    depth = cfg.depth
    if not 3 <= depth <= 8:
        raise UsageError("example8 depth must be in 3..8")
    tree = FreeGroupTree()
    fan = tree_fan_map(tree)
    plane_model = fan.target
    verdicts = []

    est = estimate_delta(tree, ExhaustiveSample(min(depth, 4)))
    verdicts.append(Verdict(
        "tree-delta-exact-zero", est.delta_hat == 0.0,
        {"delta_hat": est.delta_hat, "exhaustive": est.exhaustive},
        _witness(tree, est.witness)))

    fit = checkers.fit_radial(fan, tree_root_geodesics(tree, min(depth + 1, 8)))
    verdicts.append(Verdict(
        "radial-fit-1-0", fit.passed and fit.lambda2 == 1.0 and fit.mu2 == 0.0,
        {"lambda2": fit.lambda2, "mu2": fit.mu2},
        _witness(tree, fit.worst_pair)))

    bounds = [(n, measured_jump(n), jump_bound(n)) for n in range(1, 11)]
    b_prime = max(m for _, m, _ in bounds)
    sup_bound = max(b for _, _, b in bounds)
    verdicts.append(Verdict(
        "jump-bounds", all(m <= b + cfg.tolerance for _, m, b in bounds)
        and abs(sup_bound - jump_bound(2)) < 1e-12,
        {"b_prime": b_prime, "sup_bound": sup_bound,
         "table": [{"n": n, "measured": m, "bound": b} for n, m, b in bounds]}))

    points = ball(min(depth, 7))
    lam = 1.0 + b_prime
    lsl = checkers.fit_lsl(fan, points, lambda_grid=[1.0, lam])
    verdicts.append(Verdict(
        "lsl-fit-jump-envelope", lsl.mu_for(lam) <= b_prime,
        {"lambda1": lam, "mu1": lsl.mu_for(lam), "mu1_at_1": lsl.mu_for(1.0)},
        _witness(tree, lsl.worst_pair)))

    table = checkers.check_coarsely_n_to_1(fan, 2, range(1, 7), ball(depth))
    monotone = all(b is not None for _, b in table.table) and \
        all(x <= y for (_, x), (_, y) in zip(table.table, table.table[1:]))
    verdicts.append(Verdict(
        "coarsely-2-to-1", table.passed and monotone,
        {"table": [{"R": r, "S": s} for r, s in table.table]},
        [] if table.counterexample is None else _witness(tree, table.counterexample[1])))

    angle_dev, angle_ok = 0.0, True
    for k in range(3, min(depth, 7) + 1):
        gap = 2.0 * math.pi / (4 * 3 ** (k - 1))
        angles = np.sort(np.array([a % (2 * math.pi) for a in sphere_angles(k)]))
        diffs = np.diff(angles)
        diffs = np.append(diffs, 2 * math.pi - (angles[-1] - angles[0]))
        angle_dev = max(angle_dev, float(np.max(np.abs(diffs - gap))))
        angle_ok = angle_ok and len(set(np.round(angles, 12))) == len(angles)
    verdicts.append(Verdict(
        "image-angles-equally-spaced", angle_ok and angle_dev < 1e-9,
        {"max_gap_deviation": angle_dev, "depths": list(range(3, min(depth, 7) + 1))}))

    b_min_by_depth = {}
    surjective_all, mult_ok = True, True
    for k in range(3, min(depth, 7) + 1):
        src = boundary.tree_truncation(tree, k)
        tgt = boundary.circle_truncation(k, plane_model)
        induced = boundary.induce_boundary_map(fan, src, tgt)
        surjective_all = surjective_all and induced.surjective()
        mult_ok = mult_ok and induced.multiplicity_up_to_adjacency() <= 2
        chk = boundary.boundary_n_to_1_check(fan, src, 2, 2.0, bound=2.0)
        b_min_by_depth[k] = chk.minimal_bound
    b_vals = [v for v in b_min_by_depth.values() if v is not None]
    b_stable = b_vals and (max(b_vals) - min(b_vals) < 0.35)
    verdicts.append(Verdict(
        "induced-boundary-2-to-1", surjective_all and mult_ok and bool(b_stable)
        and all(v <= 2.0 for v in b_vals),
        {"minimal_B_by_depth": {str(k): v for k, v in b_min_by_depth.items()},
         "surjective": surjective_all, "multiplicity_le_2": mult_ok}))

    edge_samples = [p for w in ball(depth) if w.digits
                    for p in _edge_points(w, 4)] + ball(depth)
    targets = plane_model.enumerate(min(depth - 1, 6))
    surj = checkers.check_coarse_surjectivity(fan, targets, edge_samples, ceiling=2.0)
    verdicts.append(Verdict(
        "coarsely-surjective", surj.passed,
        {"S": surj.s_dense, "ceiling": surj.ceiling},
        [] if surj.worst_target is None else _witness(plane_model, [surj.worst_target])))

    vis = checkers.check_visual(fan, ball(min(depth, 6)), range(0, 7),
                                s_ceiling=min(depth, 6) + 1.0)
    vis_monotone = all(x[1] <= y[1] for x, y in zip(vis.table, vis.table[1:]))
    verdicts.append(Verdict(
        "visual-modulus", vis.passed and vis_monotone,
        {"table": [{"r": r, "s": s} for r, s in vis.table]}))

    stab = checkers.check_ray_stability(fan, tree_root_geodesics(tree, depth))
    verdicts.append(Verdict(
        "ray-stability", stab.h_bound <= 1.0,
        {"H": stab.h_bound, "by_length": [{"len": l, "H": h} for l, h in stab.by_length]},
        _witness(tree, stab.worst_ray)))

    pb = checkers.fit_product_lower_bound(fan, ball(min(depth, 6)))
    verdicts.append(Verdict(
        "product-lower-bound", pb.b_for(1.0) <= 1.0,
        {"A": 1.0, "B": pb.b_for(1.0)},
        _witness(tree, pb.worst_pair)))

    persistence = (surj.passed and table.passed and surjective_all and mult_ok)
    verdicts.append(Verdict(
        "persistence-pipeline", persistence,
        {"coarse_surjective": surj.passed, "coarsely_2_to_1": table.passed,
         "induced_surjective": surjective_all, "induced_multiplicity_le_2": mult_ok}))

    return PropertyReport("example8", cfg.payload(), verdicts)


def _edge_points(w, per_edge):
    from .free_group_tree import EdgePoint

    parent = w.parent
    digit = w.digits[-1]
    return [EdgePoint(parent, digit, i / per_edge) for i in range(1, per_edge)]


# ---------------------------------------------------------------------------
# the cone suite


def verify_cone(cfg):
    levels = cfg.levels
    if not 3 <= levels <= 9:
        raise UsageError("cone levels must be in 3..9")
    cantor = CantorModel() if cfg.model is None else load_compact_model(cfg.model)
    interval = IntervalModel()
    source = build_cone(cantor, levels)
    target = build_cone(interval, levels)
    lift = lift_boundary_map(cantor_map, source, target)
    verdicts = []

    verdicts.append(Verdict(
        "net-validation", True,
        {"source_vertices": len(source.vertices), "target_vertices": len(target.vertices)}))

    est = estimate_delta(target, ExhaustiveSample(min(levels, 4)))
    verdicts.append(Verdict(
        "interval-cone-delta", est.delta_hat <= 8.0,
        {"delta_hat": est.delta_hat}, _witness(target, est.witness)))

    for graph, name in ((source, "source"), (target, "target")):
        chk = cone_boundary_product_check(graph, graph.compact, slack=2.0)
        verdicts.append(Verdict(
            f"cone-product-check-{name}", chk.passed,
            {"worst_gap": chk.worst_gap, "slack": chk.slack},
            _witness(graph, chk.worst_pair)))

    fit = checkers.fit_radial(lift, source.root_geodesics())
    verdicts.append(Verdict(
        "lift-radial-fit", fit.passed and fit.lambda2 == 1.0 and fit.mu2 <= 1.0,
        {"lambda2": fit.lambda2, "mu2": fit.mu2}))

    table = checkers.check_coarsely_n_to_1(lift, 2, range(1, 7),
                                           source.enumerate(levels))
    verdicts.append(Verdict(
        "lift-coarsely-2-to-1", table.passed,
        {"table": [{"R": r, "S": s} for r, s in table.table]}))

    esc = product_escalation_table(lift, 2, range(1, levels + 1),
                                   points=source.enumerate(levels))
    margins = [e.b_sup - e.r for e in esc if e.b_sup is not None]
    margin = max(margins) if margins else 0.0
    verdicts.append(Verdict(
        "escalation-margin", margin <= 1.0,
        {"M": margin,
         "table": [{"r": e.r, "b_sup": e.b_sup} for e in esc]}))

    cover_ok, cover_rows = True, []
    for n in (2, 3, 4):
        trunc = boundary.cantor_truncation(n + 3)
        cover = boundary.cantor_cylinder_cover(trunc, n)
        verdict = boundary.capacity_cover_check(cover, trunc)
        exact = abs(verdict.worst_diameter - 2.0 ** (-n + 1)) < 1e-12
        cover_ok = cover_ok and verdict.passed and exact
        cover_rows.append({"n": n, "diameter": verdict.worst_diameter,
                           "bound": verdict.diameter_bound,
                           "multiplicity": verdict.worst_multiplicity})
    verdicts.append(Verdict("capacity-covers", cover_ok, {"covers": cover_rows}))

    sep_ok, sep_checked = _cantor_separation(min(levels, 8))
    verdicts.append(Verdict(
        "cantor-separation", sep_ok,
        {"depth": min(levels, 8), "r_checked": sep_checked}))

    # r = 2 is vacuous here: level-8 products quantize so coarsely that three
    # vertices cannot be pairwise below 2 (two always share the first
    # coordinate); r = 3 is the first scale with admissible triples.
    src_trunc = boundary.cone_truncation(source)
    chk = boundary.boundary_n_to_1_check(lift, src_trunc, 2, 3.0, bound=3.5)
    verdicts.append(Verdict(
        "lift-boundary-2-to-1", chk.passed and chk.minimal_bound is not None,
        {"minimal_B": chk.minimal_bound, "r": chk.r, "bound": chk.bound}))

    if levels >= 6:
        src6 = _cone_truncation_at(source, 6)
        tgt6 = _cone_truncation_at(target, 6)
        induced = boundary.induce_boundary_map(lift, src6, tgt6)
        verdicts.append(Verdict(
            "lift-induced-cells", induced.surjective()
            and induced.multiplicity_up_to_adjacency() <= 2,
            {"surjective": induced.surjective(),
             "multiplicity": induced.multiplicity_up_to_adjacency(),
             "unresolved": len(induced.unresolved)}))

    cantor_trunc = boundary.cantor_truncation(10)
    slope_c, resid_c, _ = boundary.box_dimension_estimate(
        cantor_trunc, [2.0 ** (-i) for i in range(2, 8)])
    circle_trunc = boundary.circle_truncation(min(levels, 8))
    slope_s, resid_s, _ = boundary.box_dimension_estimate(
        circle_trunc, [2.0 ** (-i) for i in range(1, 6)])
    verdicts.append(Verdict(
        "box-dimensions", abs(slope_c - 1.0) <= 0.15 and abs(slope_s - 1.0) <= 0.15,
        {"cantor_slope": slope_c, "cantor_residual": resid_c,
         "circle_slope": slope_s, "circle_residual": resid_s}))

    return PropertyReport("cone", cfg.payload(), verdicts)


def _cone_truncation_at(graph, level):
    from .hyperbolic_cone import ApproxGraph

    sub = ApproxGraph(graph.compact, level)
    return boundary.cone_truncation(sub)


def _cantor_separation(depth):
    """Any three points pairwise farther than r have an image pair at least
    r/2 apart; exhaustive over depth-`depth` points and dyadic r.

    A violating triple is a triangle in the graph of pairs that are both
    r-spread in the source and r/2-close under the binary-value map.
    """
    pts = cantor_points(depth)
    bits = np.array([p.bits for p in pts], dtype=np.int8)
    weights = 0.5 ** np.arange(1, depth + 1)
    diff = np.abs(bits[:, None, :] - bits[None, :, :]).astype(float)
    dsrc = diff @ weights
    values = bits.astype(float) @ weights
    dimg = np.abs(values[:, None] - values[None, :])
    checked = []
    for m in range(1, 8):
        r = 2.0 ** (-m)
        bad = (dsrc > r) & (dimg < r / 2.0)
        np.fill_diagonal(bad, False)
        a = bad.astype(np.float32)
        if bool((((a @ a) > 0) & bad).any()):
            return False, checked
        checked.append(r)
    return True, checked


# ---------------------------------------------------------------------------
# single-model delta reports and probes


def delta_suite(cfg, model_name):
    verdicts = []
    if model_name == "f2tree":
        est = estimate_delta(FreeGroupTree(), ExhaustiveSample(min(cfg.depth, 4)))
        passed = est.delta_hat == 0.0
        model = FreeGroupTree()
    elif model_name == "plane":
        model = HyperbolicPlane()
        est = estimate_delta(model, SeededSample(cfg.samples, cfg.seed, min(cfg.depth, 6)))
        passed = 0.0 < est.delta_hat <= 4.0
    elif model_name == "cone-cantor":
        model = build_cone(CantorModel(), min(cfg.levels, 6))
        est = estimate_delta(model, ExhaustiveSample(min(cfg.levels, 4)))
        passed = est.delta_hat <= 8.0
    elif model_name == "cone-interval":
        model = build_cone(IntervalModel(), min(cfg.levels, 6))
        est = estimate_delta(model, ExhaustiveSample(min(cfg.levels, 4)))
        passed = est.delta_hat <= 8.0
    elif model_name == "comb":
        model, _ = comb_counterexample(min(cfg.depth + 5, 12))
        est = estimate_delta(model, ExhaustiveSample(2 * model.spine_length))
        passed = est.delta_hat <= 8.0
    else:
        raise UsageError(f"unknown model: {model_name!r}")
    verdicts.append(Verdict(
        f"delta-{model_name}", passed,
        {"delta_hat": est.delta_hat, "exhaustive": est.exhaustive},
        _witness(model, est.witness), sampled=not est.exhaustive))
    return PropertyReport(f"delta-{model_name}", cfg.payload(), verdicts)


_PROBE_CHECKS = ("lsl", "radial", "visual", "surjective", "n-to-1",
                 "stability", "product-bound")


def _probe_map(cfg, map_name):
    if map_name == "example8":
        tree = FreeGroupTree()
        fan = tree_fan_map(tree)
        pts = ball(min(cfg.depth, 6))
        rays = tree_root_geodesics(tree, min(cfg.depth, 6))
        return fan, pts, rays, min(cfg.depth, 6) + 1.0
    if map_name == "comb":
        # radial probing uses the single infinite ray (the spine): the comb's
        # finite tooth geodesics are exactly what the ray-wise bound misses
        comb, cmap = comb_counterexample(12)
        pts = comb.enumerate(10 ** 9)
        rays = [comb.spine_ray()]
        return cmap, pts, rays, 8.0
    if map_name == "cantor-lift":
        source = build_cone(CantorModel(), min(cfg.levels, 8))
        target = build_cone(IntervalModel(), min(cfg.levels, 8))
        lift = lift_boundary_map(cantor_map, source, target)
        return lift, source.enumerate(source.max_level), source.root_geodesics(), \
            source.max_level + 1.0
    if map_name == "tree-identity":
        tree = FreeGroupTree()
        ident = maps.SpaceMap(tree, tree, lambda p: p, "tree-identity")
        return ident, ball(min(cfg.depth, 5)), \
            tree_root_geodesics(tree, min(cfg.depth, 5)), min(cfg.depth, 5) + 1.0
    raise UsageError(f"unknown map: {map_name!r}")


def probe(cfg, map_name, check):
    if check not in _PROBE_CHECKS:
        raise UsageError(f"unknown check: {check!r} (choose from {_PROBE_CHECKS})")
    space_map, points, rays, ceiling = _probe_map(cfg, map_name)
    src = space_map.source
    if check == "lsl":
        fit = checkers.fit_lsl(space_map, points)
        v = Verdict("lsl", fit.passed,
                    {"lambda1": fit.lambda1, "mu1": fit.mu1,
                     "envelope": [list(e) for e in fit.envelope]},
                    _witness(src, fit.worst_pair))
    elif check == "radial":
        fit = checkers.fit_radial(space_map, rays)
        v = Verdict("radial", fit.passed,
                    {"lambda2": fit.lambda2, "mu2": fit.mu2},
                    _witness(src, fit.worst_pair))
    elif check == "visual":
        vis = checkers.check_visual(space_map, points, range(0, 7), ceiling)
        v = Verdict("visual", vis.passed,
                    {"table": [{"r": r, "s": s} for r, s in vis.table],
                     "ceiling": vis.ceiling},
                    [[_witness(src, [x])[0], _witness(src, [y])[0],
                      {"source_product": gs, "image_product": gt}]
                     for x, y, gs, gt in vis.violations])
    elif check == "surjective":
        targets = space_map.target.enumerate(min(cfg.depth, 5)) \
            if hasattr(space_map.target, "enumerate") else []
        surj = checkers.check_coarse_surjectivity(space_map, targets, points, 2.0)
        v = Verdict("surjective", surj.passed, {"S": surj.s_dense})
    elif check == "n-to-1":
        table = checkers.check_coarsely_n_to_1(space_map, 2, range(1, 5), points)
        v = Verdict("n-to-1", table.passed,
                    {"table": [{"R": r, "S": s} for r, s in table.table]})
    elif check == "stability":
        stab = checkers.check_ray_stability(space_map, rays)
        v = Verdict("stability", stab.h_bound <= 2.0, {"H": stab.h_bound})
    else:
        pb = checkers.fit_product_lower_bound(space_map, points)
        v = Verdict("product-bound", pb.b_for(1.0) <= ceiling,
                    {"frontier": [list(e) for e in pb.frontier]},
                    _witness(src, pb.worst_pair))
    return PropertyReport(f"probe-{map_name}-{check}", cfg.payload(), [v])
