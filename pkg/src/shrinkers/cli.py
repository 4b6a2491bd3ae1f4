"""Command-line interface: integrate, find, render, verify.

Exit codes: 0 on success, 1 when a computation fails (a diagnostic JSON is
written and printed), 2 for invalid arguments.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .export import (FigureStyle, curve_csv, curve_record, euler_characteristic, mesh_obj,
                     read_curve_csv, render_svg, revolve_mesh, write_atomic, write_json)
from .integrator import IntegrationError, IntegratorSettings, integrate, integrate_both
from .model import AmbientConfig, EventKind, InitialData
from .shooting import (BracketError, DepthError, Near, Topology, build_family,
                       find_angenent_torus)
from .verification import SUITES, run_suite

__all__ = ["RunConfig", "build_parser", "main"]

_NEAR = {"plane": Near.PLANE, "cylinder": Near.CYLINDER, "torus": Near.ANGENENT_TORUS}


@dataclass(frozen=True)
class RunConfig:
    """Options shared by every command."""

    config: AmbientConfig
    settings: IntegratorSettings
    out_dir: str
    resolution: float
    style: FigureStyle = FigureStyle()

    def path(self, name):
        return os.path.join(self.out_dir, name)


def _positive(text):
    v = float(text)
    if not v > 0.0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _count(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text!r}")
    return v


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, required=True, help="dimension of the shrinker (>= 2)")
    p.add_argument("--rel-tol", type=_positive, default=1e-10)
    p.add_argument("--abs-tol", type=_positive, default=1e-12)
    p.add_argument("--seed-grid-resolution", type=_positive, default=1e-3,
                   help="parameter step of the scans that seed bisection")
    p.add_argument("--out-dir", default=None,
                   help="output directory (default: $SHRINKER_OUT_DIR or the current one)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="shrinkers",
                                     description="Rotational self-shrinkers by shooting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", parents=[common], help="integrate one profile curve")
    p.add_argument("--axis-start", type=_positive, metavar="X0",
                   help="shoot perpendicularly from (X0, 0)")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--r0", type=_positive)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--max-arclength", type=_positive, default=None)
    p.add_argument("--name", default="curve", help="file stem of the outputs")

    p = sub.add_parser("find", parents=[common], help="run a shooting construction")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--near", choices=sorted(_NEAR))
    g.add_argument("--angenent-torus", action="store_true")
    p.add_argument("--count", type=_count, default=3)

    p = sub.add_parser("render", parents=[common], help="draw a curve CSV")
    p.add_argument("curve", help="curve CSV written by integrate or find")
    p.add_argument("--svg", default=None)
    p.add_argument("--obj", default=None)
    p.add_argument("--azimuthal-samples", type=int, default=64)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=["all"] + list(SUITES), default="all")
    return parser


def _run_config(parser, args) -> RunConfig:
    try:
        config = AmbientConfig(args.n)
    except ValueError as exc:
        parser.error(str(exc))
    kw = {"rel_tol": args.rel_tol, "abs_tol": args.abs_tol}
    if getattr(args, "max_arclength", None) is not None:
        kw["max_arclength"] = args.max_arclength
    try:
        settings = IntegratorSettings(**kw)
    except ValueError as exc:
        parser.error(str(exc))
    out = args.out_dir or os.environ.get("SHRINKER_OUT_DIR") or os.getcwd()
    return RunConfig(config, settings, out, args.seed_grid_resolution)


def _fail(rc: RunConfig, name: str, diag: dict) -> int:
    path = write_json(rc.path(name), diag)
    print(f"error: {diag.get('error')} (details in {path})", file=sys.stderr)
    return 1


def _cmd_integrate(parser, args, rc: RunConfig) -> int:
    if args.axis_start is not None:
        if args.r0 is not None or args.alpha0 is not None:
            parser.error("--axis-start excludes --r0/--alpha0")
        init = InitialData.axis_start(args.axis_start)
    else:
        if args.r0 is None or args.alpha0 is None:
            parser.error("give --axis-start X0 or both --r0 and --alpha0")
        init = InitialData.interior(args.x0, args.r0, args.alpha0)
    try:
        curve = integrate_both(rc.config, rc.settings, init)
    except IntegrationError as exc:
        st = exc.last_state
        return _fail(rc, f"{args.name}.error.json", {
            "error": str(exc), "command": "integrate",
            "last_state": {"s": st.s, "x": st.x, "r": st.r, "alpha": st.alpha}})
    # the segment that contains s = 0 gets index 0
    behind = sum(1 for e in curve.events_of(EventKind.VERTICAL_TANGENT)
                 if 0 < e.index < len(curve) - 1 and curve.s[e.index] <= 0.0)
    write_atomic(rc.path(f"{args.name}.csv"), curve_csv(curve))
    write_json(rc.path(f"{args.name}.json"), curve_record(curve, -behind, {
        "init": {"kind": init.kind, "x0": init.x0, "r0": init.r0, "alpha0": init.alpha0}}))
    return 0


def _cmd_find(args, rc: RunConfig) -> int:
    if args.angenent_torus:
        try:
            r_ang, curve = find_angenent_torus(rc.config, rc.settings, rc.resolution)
        except (BracketError, DepthError, IntegrationError) as exc:
            write_json(rc.path("angenent_torus.json"), {"near": "angenent-torus",
                                                        "entries": []})
            return _fail(rc, "angenent_torus.error.json",
                         {"error": str(exc), "command": "find"})
        name = "angenent_torus_k0.csv"
        write_atomic(rc.path(name), curve_csv(curve))
        write_json(rc.path("angenent_torus.json"), {
            "near": "angenent-torus",
            "entries": [{"k": 0, "t_k": r_ang, "topology": Topology.TORUS.value,
                         "segment_count": len(curve.events_of(EventKind.VERTICAL_TANGENT)),
                         "curve_file": name, "closure_defect": curve.closure_defect()}]})
        return 0

    near = _NEAR[args.near]
    try:
        fam = build_family(rc.config, rc.settings, near, args.count, rc.resolution)
    except (BracketError, DepthError, IntegrationError) as exc:
        write_json(rc.path(f"family_{args.near}.json"), {"near": args.near, "entries": []})
        return _fail(rc, f"family_{args.near}.error.json",
                     {"error": str(exc), "command": "find"})
    entries = []
    for e in fam.entries:
        name = f"family_{args.near}_k{e.k}.csv"
        write_atomic(rc.path(name), curve_csv(e.curve))
        rec = {"k": e.k, "t_k": e.t, "topology": e.topology.value,
               "segment_count": e.segment_count, "curve_file": name,
               "types": list(e.types)}
        if e.bracket is not None:
            rec["bracket"] = list(e.bracket)
        if e.limit is not None:
            rec["limit"] = e.limit
        entries.append(rec)
    manifest = {"near": args.near, "entries": entries}
    if fam.r_ang is not None:
        manifest["r_ang"] = fam.r_ang
    if fam.diagnostic is not None:
        manifest["diagnostic"] = fam.diagnostic
    write_json(rc.path(f"family_{args.near}.json"), manifest)
    if fam.diagnostic is not None:
        print(f"error: {fam.diagnostic}", file=sys.stderr)
        return 1
    return 0


def _cmd_render(parser, args, rc: RunConfig) -> int:
    if args.obj is not None and rc.config.n != 2:
        parser.error("--obj needs --n 2: higher-dimensional profiles have no 3-D surface")
    if args.azimuthal_samples < 3:
        parser.error("--azimuthal-samples must be at least 3")
    try:
        table = read_curve_csv(args.curve)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    stem = os.path.splitext(os.path.basename(args.curve))[0]
    svg = args.svg or rc.path(f"{stem}.svg")
    write_atomic(svg, render_svg(rc.config.n, table.x, table.r, rc.style))
    if args.obj is not None:
        verts, faces = revolve_mesh(table.x, table.r, args.azimuthal_samples)
        write_atomic(args.obj, mesh_obj(verts, faces))
        print(f"euler characteristic {euler_characteristic(len(verts), faces)}")
    return 0


def _cmd_verify(args, rc: RunConfig) -> int:
    reports = run_suite(rc.config, args.suite, rc.settings)
    write_json(rc.path(f"verify_{args.suite}.json"), [r.to_dict() for r in reports])
    failed = [r for r in reports if not r.passed]
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
    return 1 if failed else 0


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rc = _run_config(parser, args)
    if args.command == "integrate":
        return _cmd_integrate(parser, args, rc)
    if args.command == "find":
        return _cmd_find(args, rc)
    if args.command == "render":
        return _cmd_render(parser, args, rc)
    return _cmd_verify(args, rc)


if __name__ == "__main__":
    sys.exit(main())
