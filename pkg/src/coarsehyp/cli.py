"""Command-line front end.

Subcommands: `delta <model>`, `probe <map> --check <name>`,
`verify example8|cone`, `render figure1|figure2`, `report --merge ...`.
Exit codes: 0 all verdicts pass, 1 a property violation (with witnesses in
the report), 2 usage or config error.  Reports are deterministic given the
config and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from datetime import datetime, timezone

from . import render as render_mod
from . import suites
from .errors import UsageError
from .report import merge_reports, report_from_payload
from .suites import RunConfig

_MODELS = ("f2tree", "plane", "cone-cantor", "cone-interval", "comb")
_MAPS = ("example8", "comb", "cantor-lift", "tree-identity")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coarsehyp",
        description="Verdicts and figures for coarse hyperbolic geometry models")
    parser.add_argument("--config", help="JSON file with RunConfig overrides "
                                         "(explicit flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--levels", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--no-timestamp", action="store_true", default=None)
        p.add_argument("--model", default=None,
                       help="compact-model JSON file for cone suites")

    p_delta = sub.add_parser("delta", help="hyperbolicity estimate for one model")
    p_delta.add_argument("target", choices=_MODELS)
    common(p_delta)

    p_probe = sub.add_parser("probe", help="run one checker against one map")
    p_probe.add_argument("target", choices=_MAPS)
    p_probe.add_argument("--check", required=True, choices=suites._PROBE_CHECKS)
    common(p_probe)

    p_verify = sub.add_parser("verify", help="run a full verification suite")
    p_verify.add_argument("target", choices=("example8", "cone"))
    common(p_verify)

    p_render = sub.add_parser("render", help="emit an SVG figure")
    p_render.add_argument("target", choices=("figure1", "figure2"))
    common(p_render)

    p_report = sub.add_parser("report", help="merge report files")
    p_report.add_argument("--merge", nargs="+", required=True)
    common(p_report)
    return parser


def make_config(args):
    cfg = RunConfig()
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        for f in fields(RunConfig):
            if f.name in data:
                setattr(cfg, f.name, data[f.name])
    for name in ("depth", "levels", "samples", "seed", "tolerance", "out", "model"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "no_timestamp", None):
        cfg.no_timestamp = True
    return cfg


def _emit(report, cfg):
    text = report.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "delta":
            cfg.suite = f"delta-{args.target}"
            return _emit(suites.delta_suite(cfg, args.target), cfg)
        if args.command == "probe":
            cfg.suite = f"probe-{args.target}-{args.check}"
            return _emit(suites.probe(cfg, args.target, args.check), cfg)
        if args.command == "verify":
            cfg.suite = args.target
            report = suites.verify_example8(cfg) if args.target == "example8" \
                else suites.verify_cone(cfg)
            return _emit(report, cfg)
        if args.command == "render":
            stamp = None if cfg.no_timestamp else \
                datetime.now(timezone.utc).isoformat()
            depth = cfg.depth if args.target != "figure1" else min(cfg.depth, 6)
            svg = render_mod.render(args.target, min(depth, 7), stamp)
            if cfg.out:
                with open(cfg.out, "w") as fh:
                    fh.write(svg)
            else:
                sys.stdout.write(svg)
            return 0
        if args.command == "report":
            reports = []
            for path in args.merge:
                with open(path) as fh:
                    reports.append(report_from_payload(json.load(fh)))
            return _emit(merge_reports(reports), cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
