"""Command-line front end.

    vrtpq [--config PATH] [--out DIR] [--json] COMMAND ...

Commands: thresholds, dispatch, circles, scurve, simulate. Exit codes are
listed in the ``EXIT_*`` constants.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .dispatch import dispatch, thresholds
from .errors import ConfigError, DomainError, EmptyCurve, TraceError
from .files import (RunConfig, Report, load_config, read_trace, summary_to_json,
                    write_csv, write_log)
from .geometry import circle_family, s_curve, s_max_circle
from .sim import run, summarize
from .svg import circles_svg, scurve_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_TRACE = 4
EXIT_INFEASIBLE = 5
EXIT_IO = 6

DEFAULT_CIRCLE_VS = [round(0.1 * k, 10) for k in range(1, 14)]


class _Style:
    def __init__(self, stream):
        self.on = stream.isatty() and not os.environ.get("VRT_NO_COLOR")

    def __call__(self, text: str, code: str) -> str:
        return f"\033[{code}m{text}\033[0m" if self.on else text


def _emit(args, payload: dict, table: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(table)


def _out_dir(args, config: RunConfig) -> Path:
    out = Path(args.out) if args.out is not None else config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_thresholds(args, config: RunConfig) -> int:
    th = thresholds(config.substation)
    report = Report(thresholds=th, provenance={"config": config.to_dict()})
    if args.out is not None:
        (_out_dir(args, config) / "thresholds.json").write_text(report.to_json(), encoding="utf-8")
    table = (
        f"vs_theory  {th.vs_theory:.6f}  (90-degree limit at p_load)\n"
        f"vs_min     {th.vs_min:.6f}  (below: disconnect)\n"
        f"vs_m       {th.vs_m:.6f}  (above: reactive power only)\n"
    )
    _emit(args, report.to_dict(), table)
    return EXIT_OK


def cmd_dispatch(args, config: RunConfig) -> int:
    params = config.substation
    if args.target_vl is not None:
        params = params.with_load_voltage(args.target_vl)
    policy = config.policy
    if args.fraction is not None:
        policy = dataclasses.replace(policy, q_selection_fraction=args.fraction)
    decisions = tuple(dispatch(vs, params, policy) for vs in args.vs)
    provenance = {"config": config.to_dict(), "vs": list(args.vs),
                  "q_selection_fraction": policy.q_selection_fraction, "v_l": params.v_l}
    report = Report(thresholds=thresholds(params), decisions=decisions, provenance=provenance)
    if args.out is not None:
        (_out_dir(args, config) / "dispatch.json").write_text(report.to_json(), encoding="utf-8")

    style = _Style(sys.stdout)
    lines = [f"{'vs':>8} {'case':>10} {'Q':>10} {'P_grid':>10} {'P_vrt':>10} "
             f"{'S_grid':>10} {'S_nongrid':>10} {'delta_deg':>10}"]
    for d in decisions:
        label = style(f"{d.case.value:>10}", "31;1" if d.disconnect else "32")
        lines.append(f"{d.vs:8.4f} {label} {d.q_total:10.4f} {d.p_grid:10.4f} {d.p_vrt:10.4f} "
                     f"{d.s_grid:10.4f} {d.s_nongrid:10.4f} {np.degrees(d.delta):10.4f}")
        if d.case.value == "DualPQ":
            lines.append(f"{'':8} {'':10} Q_min={d.q_min:.4f} Q_ints={d.q_ints:.4f}")
    infeasible = [d.vs for d in decisions if d.disconnect]
    if infeasible:
        lines.append(style(
            "advisory: no P/Q within S_max holds the load voltage at vs="
            + ", ".join(f"{v:g}" for v in infeasible) + "; the load should disconnect", "31"))
    _emit(args, report.to_dict(), "\n".join(lines) + "\n")
    return EXIT_INFEASIBLE if infeasible else EXIT_OK


def cmd_circles(args, config: RunConfig) -> int:
    params = config.substation
    vs_list = args.vs or DEFAULT_CIRCLE_VS
    family = circle_family(params, vs_list, args.n_points)
    s_circle = s_max_circle(params.s_max, args.n_points)
    out = _out_dir(args, config)
    csv_path, svg_path = out / "circles.csv", out / "circles.svg"
    write_csv(csv_path, ["vs", "delta_deg", "p", "q"], (
        (float(locus.vs), float(d), float(p), float(q))
        for locus in family
        for d, p, q in zip(np.degrees(locus.angle), locus.p, locus.q)
    ))
    svg_path.write_text(circles_svg(family, s_circle, params.p_load, -params.v_l ** 2 / params.x),
                        encoding="utf-8")
    payload = {"loci": len(family), "points": sum(len(l) for l in family),
               "files": [str(csv_path), str(svg_path)]}
    _emit(args, payload, f"wrote {len(family)} loci to {csv_path} and {svg_path}\n")
    return EXIT_OK


def cmd_scurve(args, config: RunConfig) -> int:
    params = config.substation
    points = s_curve(params, args.lo, args.hi, args.n)
    th = thresholds(params)
    out = _out_dir(args, config)
    csv_path, svg_path = out / "scurve.csv", out / "scurve.svg"
    write_csv(csv_path, ["vs", "q", "s"], ((pt.vs, pt.q, pt.s) for pt in points))
    svg_path.write_text(scurve_svg(points, th.vs_theory, (args.lo, args.hi)), encoding="utf-8")
    best = min(points, key=lambda pt: pt.s)
    payload = {"rows": len(points), "cutoff_vs": th.vs_theory, "min_vs": best.vs, "min_s": best.s,
               "files": [str(csv_path), str(svg_path)]}
    _emit(args, payload,
          f"wrote {len(points)} rows to {csv_path}; cutoff at vs={th.vs_theory:.4g}, "
          f"minimum S={best.s:.6f} at vs={best.vs:.4f}\n")
    return EXIT_OK


def _simulate_one(path: Path, config: RunConfig, out: Path, compensation: bool) -> dict:
    trace = read_trace(path)
    log = run(trace, config.substation, config.ups, config.policy, compensation)
    summary = summarize(log)
    log_path = out / f"{path.stem}_log.csv"
    summary_path = out / f"{path.stem}_summary.json"
    write_log(log_path, log)
    summary_path.write_text(summary_to_json(summary), encoding="utf-8")
    return {"trace": str(path), "summary": dataclasses.asdict(summary),
            "files": [str(log_path), str(summary_path)]}


def cmd_simulate(args, config: RunConfig) -> int:
    out = _out_dir(args, config)
    paths = [Path(p) for p in args.trace]
    stems = [p.stem for p in paths]
    if len(set(stems)) != len(stems):
        raise TraceError("trace file names must be unique (outputs are keyed by name)")
    with ThreadPoolExecutor(max_workers=min(4, len(paths))) as pool:
        results = list(pool.map(lambda p: _simulate_one(p, config, out, args.compensation), paths))
    lines = []
    for res in results:
        s = res["summary"]
        lines.append(f"{res['trace']}: off-grid {s['time_off_grid']:.4f} s, "
                     f"disconnects {s['disconnect_count']}, max|Q| {s['max_abs_q']:.4f}, "
                     f"max P_vrt {s['max_p_vrt']:.4f}, energy {s['nongrid_energy']:.5f} pu*s")
    _emit(args, {"runs": results}, "\n".join(lines) + "\n")
    return EXIT_OK


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--config", metavar="PATH", help="JSON run config", **default)
    parser.add_argument("--out", metavar="DIR", help="output directory", **default)
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout",
                        **default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vrtpq", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", parents=[common], help="vs_theory, vs_min and vs_m")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("dispatch", parents=[common], help="dispatch decision at given source voltages")
    p.add_argument("vs", type=float, nargs="+", help="source voltage(s), pu")
    p.add_argument("--fraction", type=float, help="Case-2 Q position between Q_min and Q_ints")
    p.add_argument("--target-vl", type=float, help="hold the load at this voltage instead")
    p.set_defaults(func=cmd_dispatch)

    p = sub.add_parser("circles", parents=[common], help="power-circle loci (CSV + SVG)")
    p.add_argument("--vs", type=float, nargs="+", help="source voltages (default 0.1..1.3)")
    p.add_argument("--n-points", type=int, default=181)
    p.set_defaults(func=cmd_circles)

    p = sub.add_parser("scurve", parents=[common], help="apparent power vs source voltage")
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=1.8)
    p.add_argument("--n", type=int, default=171)
    p.set_defaults(func=cmd_scurve)

    p = sub.add_parser("simulate", parents=[common], help="replay voltage traces")
    p.add_argument("trace", nargs="+", help="CSV with header t_s,vs_pu")
    p.add_argument("--compensation", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TraceError as exc:
        print(f"trace error: {exc}", file=sys.stderr)
        return EXIT_TRACE
    except EmptyCurve as exc:
        print(f"infeasible input: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
