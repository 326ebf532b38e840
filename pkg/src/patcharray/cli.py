"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 model/numerical failure.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import array as arr
from . import circuit, radiation
from .errors import InvalidInput, ModelError
from .geometry import DesignSpec, PatchGeometry, Substrate, WidthFormula, default_geometry, design_patch


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc


def _geometry(args) -> PatchGeometry:
    if args.geometry:
        return PatchGeometry.from_json(_read(args.geometry))
    return default_geometry()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_design(args) -> int:
    sub = Substrate(args.er, args.h_mm, args.tand, args.label)
    geo = design_patch(DesignSpec(args.f0, WidthFormula(args.width_formula), args.z0), sub)
    _write(geo.to_json() + "\n", args.out)
    return 0


def cmd_match(args) -> int:
    geo = _geometry(args)
    feed = circuit.match_feed(geo, args.z0, args.q)
    _write(feed.to_json() + "\n", args.out)
    return 0


def _sweep_format(args) -> str:
    if args.format:
        return args.format
    if args.out and args.out.lower().endswith(".csv"):
        return "csv"
    return "s1p"


def cmd_sweep(args) -> int:
    geo = _geometry(args)
    if args.feed and args.edge:
        raise InvalidInput("--feed and --edge are mutually exclusive")
    if args.feed:
        feed = circuit.FeedModel.from_json(_read(args.feed))
    elif args.edge:
        feed = circuit.edge_feed(geo, args.q)
    else:
        feed = circuit.match_feed(geo, args.z0, args.q)
    resp = circuit.s11_sweep(feed, geo, args.f_from, args.f_to, args.points, args.z0)
    fmt = _sweep_format(args)
    text = resp.to_csv() if fmt == "csv" else resp.to_touchstone()
    f_min, db_min = resp.minimum()
    summary = {"f_min_hz": f_min, "s11_min_db": db_min}
    if args.out:
        _write(text, args.out)
        sys.stdout.write(_dump(summary))
    else:
        sys.stdout.write(text)
        print(f"minimum S11 {db_min:.2f} dB at {f_min / 1e9:.4f} GHz", file=sys.stderr)
    return 0


def _pattern_metrics(p, efficiency) -> dict:
    return {
        "directivity_dbi": radiation.directivity_dbi(p),
        "gain_dbi": radiation.gain_dbi(p, efficiency),
        "prad": p.prad,
        "hpbw_e_deg": radiation.hpbw_or_sentinel(p, "E"),
        "hpbw_h_deg": radiation.hpbw_or_sentinel(p, "H"),
        "sll_e_db": radiation.sidelobe_level_db(p, "E"),
        "sll_h_db": radiation.sidelobe_level_db(p, "H"),
        "peak": {"u_max": p.peak[0], "theta_deg": p.peak[1], "phi_deg": p.peak[2]},
    }


def _emit_pattern(p, args) -> None:
    if args.out:
        if args.cut == "full":
            text = radiation.pattern_to_csv(p, args.efficiency)
        else:
            text = radiation.cut_to_csv(p, args.cut, args.efficiency)
        _write(text, args.out)


def cmd_pattern(args) -> int:
    geo = _geometry(args)
    grid = radiation.AngularGrid(args.step, args.step)
    p = radiation.sample_pattern(geo, grid, args.obliquity)
    metrics = _pattern_metrics(p, args.efficiency)
    _emit_pattern(p, args)
    sys.stdout.write(_dump(metrics))
    return 0


def cmd_array(args) -> int:
    geo = _geometry(args)
    if args.layout:
        layout = arr.ArrayLayout.from_json(_read(args.layout))
    else:
        layout = arr.ArrayLayout(args.nx, args.ny, args.dx, args.dy)
    if (args.steer_theta is None) != (args.steer_phi is None):
        raise InvalidInput("--steer-theta and --steer-phi must be given together")
    if args.steer_theta is not None:
        layout = arr.steer(layout, args.steer_theta, args.steer_phi)
    grid = radiation.AngularGrid(args.step, args.step)
    p = arr.total_pattern(geo, layout, grid, args.obliquity)
    metrics = arr.metrics_from_pattern(p, layout, args.efficiency).to_dict()
    metrics["directivity_dbi"] = radiation.directivity_dbi(p)
    metrics["grating_lobe_margin"] = arr.grating_lobe_margin(
        layout, args.steer_theta if args.steer_theta is not None else 0.0)
    _emit_pattern(p, args)
    sys.stdout.write(_dump(metrics))
    return 0


def cmd_paper_repro(args) -> int:
    geo = _geometry(args)
    grid = radiation.AngularGrid(args.step, args.step)
    rows = arr.paper_progression(geo, args.efficiency, args.q, grid, args.z0, args.obliquity)
    text = _dump(rows) if args.format == "json" else arr.progression_table(rows)
    _write(text, args.out)
    return 0


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patcharray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, geometry=True):
        p.add_argument("--config", help="JSON file supplying any flag by its long name")
        p.add_argument("--out", help="output file (default stdout)")
        if geometry:
            p.add_argument("--geometry", help="geometry JSON from `design` (default: 29 GHz design)")

    p = sub.add_parser("design", help="size a patch from frequency and substrate")
    common(p, geometry=False)
    p.add_argument("--f0", type=float, default=29e9, help="design frequency in Hz")
    p.add_argument("--er", type=float, default=2.2, help="relative permittivity")
    p.add_argument("--h-mm", type=float, default=0.784, help="substrate height in mm")
    p.add_argument("--tand", type=float, default=0.0009, help="loss tangent")
    p.add_argument("--label", default="RT/duroid 5880")
    p.add_argument("--width-formula", choices=[w.value for w in WidthFormula],
                   default=WidthFormula.STANDARD.value)
    p.add_argument("--z0", type=float, default=50.0)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("match", help="inset depth that matches the patch to z0")
    common(p)
    p.add_argument("--z0", type=float, default=50.0)
    p.add_argument("--q", type=float, default=30.0, help="resonator quality factor")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("sweep", help="S11 versus frequency")
    common(p)
    p.add_argument("--feed", help="feed JSON from `match` (default: match to z0)")
    p.add_argument("--edge", action="store_true", help="use an unmatched edge feed")
    p.add_argument("--from", dest="f_from", type=float, default=27e9)
    p.add_argument("--to", dest="f_to", type=float, default=31e9)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--z0", type=float, default=50.0)
    p.add_argument("--q", type=float, default=30.0)
    p.add_argument("--format", choices=["s1p", "csv"])
    p.set_defaults(func=cmd_sweep)

    def pattern_flags(p):
        p.add_argument("--step", type=float, default=0.5, help="grid step in degrees")
        p.add_argument("--cut", choices=["E", "H", "full"], default="full")
        p.add_argument("--efficiency", type=float, default=1.0)
        p.add_argument("--obliquity", action="store_true", help="apply cos(theta) to the element")

    p = sub.add_parser("pattern", help="single-element far field")
    common(p)
    pattern_flags(p)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("array", help="planar array far field")
    common(p)
    pattern_flags(p)
    p.add_argument("--layout", help="layout JSON {nx, ny, dx_lambda, dy_lambda, excitations}")
    p.add_argument("--nx", type=_positive_int, default=2)
    p.add_argument("--ny", type=_positive_int, default=2)
    p.add_argument("--dx", type=float, default=0.5, help="x spacing in wavelengths")
    p.add_argument("--dy", type=float, default=0.5, help="y spacing in wavelengths")
    p.add_argument("--steer-theta", type=float)
    p.add_argument("--steer-phi", type=float)
    p.set_defaults(func=cmd_array)

    p = sub.add_parser("paper-repro", help="1x1 to 8x8 gain progression table")
    common(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--efficiency", type=float, default=1.0)
    p.add_argument("--q", type=float, default=30.0)
    p.add_argument("--z0", type=float, default=50.0)
    p.add_argument("--obliquity", action="store_true")
    p.set_defaults(func=cmd_paper_repro)

    return parser


def _apply_config(parser, argv, args):
    """Re-parse with defaults taken from --config; explicit flags still win."""
    cfg = json.loads(_read(args.config))
    if not isinstance(cfg, dict):
        raise InvalidInput("--config must hold a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        dest = {"from": "f_from", "to": "f_to"}.get(dest, dest)
        if dest not in known or dest in ("config", "help"):
            raise InvalidInput(f"unknown config key {key!r} for {args.command}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (InvalidInput, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"model error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
