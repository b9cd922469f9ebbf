"""Batch front door: parse a map config, run one pipeline, emit CSV.

Every output starts with a ``#``-comment metadata block (tool version, spec
hash, parameters, optional timestamp) so runs are self-describing, and all
numbers are written with shortest round-trip formatting so identical runs
produce identical bytes.  Exit codes: 0 ok, 2 parse/usage, 3 budget,
4 invalid spec, 5 io.
"""

import argparse
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .boxdim import default_scales, dim_fit, scale_series
from .errors import InvalidInputError, SolenoidDimError
from .graphs import attractor_cloud, cloud_column_names, slice_cloud, write_cloud_csv
from .model import check_hypotheses, rate_bounds
from .specfile import load_spec, spec_hash
from .symbolic import WORD_BUDGET, word_index
from .thermo import bowen_root, finite_m_exponent, pressure_table
from .transversality import MAX_RECORDS, overlap_scan


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_point(text, l):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1 and l > 1:
        parts = parts * l
    if len(parts) != l:
        raise InvalidInputError(f"base point needs {l} comma-separated coordinates, got '{text}'")
    try:
        return np.asarray([float(p) for p in parts])
    except ValueError:
        raise InvalidInputError(f"bad base point '{text}'") from None


def _parse_int_list(text):
    try:
        return [int(p.strip()) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidInputError(f"bad integer list '{text}'") from None


def _metadata(args, spec, parameters):
    lines = [
        f"# tool: solenoid-dim {__version__}",
        f"# command: {args.command}",
        f"# spec: {args.spec}",
        f"# spec-hash: {spec_hash(spec)}",
        "# parameters: " + " ".join(f"{k}={_fmt(v)}" for k, v in sorted(parameters.items())),
    ]
    if not args.no_timestamp:
        lines.append(f"# timestamp: {datetime.now(timezone.utc).isoformat()}")
    return lines


def _write(args, lines):
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _run_check(args, spec):
    bounds = rate_bounds(spec)
    report = check_hypotheses(bounds, spec.l, spec.p)
    lines = _metadata(args, spec, {})
    lines.append("name,value")
    rows = [
        ("rates_ok", report.rates_ok),
        ("conformal_ok", report.conformal_ok),
        ("strong_contraction_ok", report.strong_contraction_ok),
        ("near_conformal_ok", report.near_conformal_ok),
        ("lambda_low", bounds.lambda_low),
        ("lambda_bar", bounds.lambda_bar),
        ("beta_low", bounds.beta_low),
        ("beta_bar", bounds.beta_bar),
        ("degree", bounds.degree),
        ("excluded_word_exponent", report.excluded_word_exponent),
    ]
    window = report.admissible_exponent_window
    rows.append(("window_low", window[0] if window else ""))
    rows.append(("window_high", window[1] if window else ""))
    rows += [(f"slack.{k}", v) for k, v in sorted(report.slacks.items())]
    lines += [f"{name},{_fmt(value)}" for name, value in rows]
    _write(args, lines)


def _run_pressure(args, spec):
    if args.s_steps < 1:
        raise InvalidInputError("need at least one sweep point")
    s_values = np.linspace(args.s_min, args.s_max, args.s_steps)
    table = pressure_table(spec, s_values, args.depth, args.budget)
    params = {"depth": args.depth, "s_min": args.s_min, "s_max": args.s_max, "s_steps": args.s_steps}
    lines = _metadata(args, spec, params)
    lines.append("s,depth,lower,value,upper")
    for curve in table:
        lines.append(
            ",".join([_fmt(curve.s), str(curve.depth), _fmt(curve.lower), _fmt(curve.value), _fmt(curve.upper)])
        )
    _write(args, lines)


def _run_bowen(args, spec):
    result = bowen_root(spec, tol=args.tol, depth=args.depth, budget=args.budget)
    lines = _metadata(args, spec, {"depth": args.depth, "tol": args.tol})
    lines.append("d0,bracket_width,depth,iterations")
    lines.append(
        ",".join([_fmt(result.d0), _fmt(result.bracket_width), str(result.depth), str(result.iterations)])
    )
    _write(args, lines)


def _run_dxm(args, spec):
    depths = _parse_int_list(args.depths)
    if not depths:
        raise InvalidInputError("need at least one depth")
    x = _parse_point(args.x, spec.l)
    lines = _metadata(args, spec, {"depths": args.depths, "x": args.x, "tol": args.tol})
    lines.append("m,t")
    for m in depths:
        t = finite_m_exponent(spec, x, m, tol=args.tol, budget=args.budget)
        lines.append(f"{m},{_fmt(t)}")
    _write(args, lines)


def _ladder(args):
    return default_scales(args.eps0, args.scales)


def _emit_series(args, spec, series, params):
    lines = _metadata(args, spec, params)
    lines.append("eps,count")
    for eps, count in zip(series.scales, series.counts):
        lines.append(f"{_fmt(eps)},{count}")
    fit = dim_fit(series)
    lines.append(f"# fit: slope={_fmt(fit.slope)} stderr={_fmt(fit.stderr)} window={fit.window[0]}:{fit.window[1]}")
    lines.append(f"# resolution: {_fmt(series.resolution)}")
    _write(args, lines)


def _run_slicedim(args, spec):
    x = _parse_point(args.x, spec.l)
    cloud = slice_cloud(spec, x, args.depth, args.budget)
    series = scale_series(cloud, _ladder(args), args.threads)
    _emit_series(args, spec, series, {"depth": args.depth, "x": args.x, "eps0": args.eps0, "scales": args.scales})


def _run_attrdim(args, spec):
    cloud = attractor_cloud(spec, args.depth, args.grid, args.budget, args.threads)
    series = scale_series(cloud, _ladder(args), args.threads)
    _emit_series(args, spec, series, {"depth": args.depth, "grid": args.grid, "eps0": args.eps0, "scales": args.scales})


def _run_transversality(args, spec):
    report = overlap_scan(
        spec,
        args.depth,
        args.grid,
        gap_threshold=args.delta,
        budget=args.budget,
        threads=args.threads,
        max_records=args.max_records,
    )
    params = {"depth": args.depth, "grid": args.grid, "delta": report.gap_threshold}
    lines = _metadata(args, spec, params)
    lines.append(",".join([f"x{i + 1}" for i in range(spec.l)] + ["word_a", "word_b", "gap", "margin"]))
    for cand in report.candidates:
        lines.append(
            ",".join(
                [_fmt(c) for c in cand.x]
                + [
                    str(word_index(spec, cand.word_a)),
                    str(word_index(spec, cand.word_b)),
                    _fmt(cand.gap),
                    _fmt(cand.margin),
                ]
            )
        )
    c1 = "" if report.c1_estimate is None else _fmt(report.c1_estimate)
    lines.append(
        "# summary: depth=%d gap_threshold=%s candidates=%d pairs=%d c1_estimate=%s verdict=%s"
        % (report.depth, _fmt(report.gap_threshold), report.candidate_count, report.pair_count, c1, report.verdict)
    )
    _write(args, lines)


def _run_export_cloud(args, spec):
    if args.out == "-":
        raise InvalidInputError("export-cloud writes a sidecar metadata file and needs --out PATH")
    if args.grid is not None:
        cloud = attractor_cloud(spec, args.depth, args.grid, args.budget, args.threads)
    else:
        x = _parse_point(args.x, spec.l)
        cloud = slice_cloud(spec, x, args.depth, args.budget)
    write_cloud_csv(cloud, args.out, cloud_column_names(spec))


_RUNNERS = {
    "check": _run_check,
    "pressure": _run_pressure,
    "bowen": _run_bowen,
    "dxm": _run_dxm,
    "slicedim": _run_slicedim,
    "attrdim": _run_attrdim,
    "transversality": _run_transversality,
    "export-cloud": _run_export_cloud,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="solenoid-dim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", required=True, help="map config file")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="parallelism cap")
    common.add_argument("--budget", type=int, default=WORD_BUDGET, help="enumeration budget")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp metadata line")

    sub.add_parser("check", parents=[common], help="run the rate-hypothesis checker")

    pressure = sub.add_parser("pressure", parents=[common], help="pressure sweep")
    pressure.add_argument("--depth", type=int, default=10)
    pressure.add_argument("--s-min", type=float, default=0.0)
    pressure.add_argument("--s-max", type=float, default=2.0)
    pressure.add_argument("--s-steps", type=int, default=50)

    bowen = sub.add_parser("bowen", parents=[common], help="solve the pressure root")
    bowen.add_argument("--depth", type=int, default=14)
    bowen.add_argument("--tol", type=float, default=1e-10)

    dxm = sub.add_parser("dxm", parents=[common], help="finite-depth exponent convergence")
    dxm.add_argument("--depths", default="4,6,8,10")
    dxm.add_argument("--x", default="0")
    dxm.add_argument("--tol", type=float, default=1e-10)

    slicedim = sub.add_parser("slicedim", parents=[common], help="box dimension of one stable slice")
    slicedim.add_argument("--depth", type=int, default=12)
    slicedim.add_argument("--x", default="0")
    slicedim.add_argument("--eps0", type=float, default=0.125)
    slicedim.add_argument("--scales", type=int, default=8)

    attrdim = sub.add_parser("attrdim", parents=[common], help="box dimension of the attractor cloud")
    attrdim.add_argument("--depth", type=int, default=10)
    attrdim.add_argument("--grid", type=float, default=2.0**-8)
    attrdim.add_argument("--eps0", type=float, default=0.125)
    attrdim.add_argument("--scales", type=int, default=8)

    trans = sub.add_parser("transversality", parents=[common], help="near-overlap margin scan")
    trans.add_argument("--depth", type=int, default=8)
    trans.add_argument("--grid", type=float, default=2.0**-6)
    trans.add_argument("--delta", type=float, default=None, help="gap threshold (default: tube width heuristic)")
    trans.add_argument("--max-records", type=int, default=MAX_RECORDS)

    export = sub.add_parser("export-cloud", parents=[common], help="write a point cloud with sidecar metadata")
    export.add_argument("--depth", type=int, default=10)
    export.add_argument("--x", default="0", help="slice base point (ignored with --grid)")
    export.add_argument("--grid", type=float, default=None, help="emit the attractor cloud on this grid instead")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec)
        _RUNNERS[args.command](args, spec)
    except SolenoidDimError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
