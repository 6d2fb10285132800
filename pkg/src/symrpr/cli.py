"""Command-line frontend.

Subcommands: ik, dkp, cusps, curve-c, sigma-sections, slice, nu-section,
label, plan, validate, sweep.  Figure subcommands write a CSV and an SVG view
of the same rows into the output directory.  Exit codes: 0 success, 1 error,
2 empty direct-kinematics solution set.
"""

import argparse
import math
import os
import sys

from . import planner as planner_mod
from .dkp import solve_dkp
from .errors import KinematicsError, OnBifurcationBoundary
from .geometry import (
    GeometryParams,
    GlidePose,
    JointSquares,
    joint_to_nudelta,
    leg_lengths_squared,
)
from .modes import aspect_of, characteristic_section_rows, label_pose
from .planner import PlanOptions, plan, read_path_csv, validate, write_path_csv
from .singularity import (
    bifurcation_sweep,
    count_cusps,
    cusp_points,
    curve_c,
    sample_curve_c,
    sample_nu_section,
    sample_slice,
)
from .textio import COLOR_CHAR, COLOR_CUSP, COLOR_S1, COLOR_S2, SvgFigure, fmt9, write_csv


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _parse_floats(text, n, what):
    parts = text.split(",")
    if len(parts) != n:
        raise _CliError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise _CliError(f"bad number in {what}: {text!r}") from None


def _parse_range(text, what):
    parts = text.split(":")
    if len(parts) != 3:
        raise _CliError(f"{what} must be lo:hi:count, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise _CliError(f"bad {what} range {text!r}") from None
    if count < 1:
        raise _CliError(f"{what} count must be >= 1")
    return lo, hi, count


def build_parser():
    shared = _Parser(add_help=False)
    shared.add_argument("--geometry", help="geometry file (key = value lines); "
                                           "defaults to b=1, h=1, d=0")
    shared.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    shared.add_argument("--out", default="out", help="output directory")

    p = _Parser(prog="symrpr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[shared], **kw)

    s = add_parser("ik", help="leg lengths of a pose")
    s.add_argument("--pose", required=True, help="psi,r,g")

    s = add_parser("dkp", help="all poses of a joint point")
    s.add_argument("--joint", required=True, help="rho1_sq,rho2_sq,rho3_sq")

    add_parser("cusps", help="cusp table and markers")

    s = add_parser("curve-c", help="discriminant curve samples")
    s.add_argument("--samples", type=int, default=720)

    s = add_parser("sigma-sections", help="jacobian and characteristic curves")
    s.add_argument("--g", type=float, default=0.0, help="section height (metadata only)")
    s.add_argument("--samples", type=int, default=720)

    s = add_parser("slice", help="singular surfaces cut at fixed rho1_sq")
    s.add_argument("--rho1sq", type=float, required=True)
    s.add_argument("--samples", type=int, default=720)

    s = add_parser("nu-section", help="deltoid and oval at constant nu")
    s.add_argument("--nu", type=float, required=True)
    s.add_argument("--samples", type=int, default=720)

    s = add_parser("label", help="aspect and assembly-mode label of a pose")
    s.add_argument("--pose", required=True, help="psi,r,g")

    s = add_parser("plan", help="plan a joint-space path between poses")
    s.add_argument("--start", required=True, help="psi,r,g")
    s.add_argument("--goal", required=True, help="psi,r,g")

    s = add_parser("validate", help="re-validate a stored path file")
    s.add_argument("--path", required=True)
    s.add_argument("--start", help="psi,r,g (defaults to the stored pose)")
    s.add_argument("--goal", help="psi,r,g (defaults to the stored pose)")

    s = add_parser("sweep", help="bifurcation values over a design grid")
    s.add_argument("--b", type=float, required=True)
    s.add_argument("--h", required=True, help="lo:hi:count")
    s.add_argument("--d", required=True, help="lo:hi:count")
    return p


def _load_geometry(args):
    if args.geometry:
        return GeometryParams.from_file(args.geometry)
    return GeometryParams(b=1.0, h=1.0, d=0.0)


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _cmd_ik(geom, args):
    pose = GlidePose(*_parse_floats(args.pose, 3, "--pose"))
    j = leg_lengths_squared(geom, pose)
    n = joint_to_nudelta(j)
    for key, val in (
        ("rho1_sq", j.rho1_sq), ("rho2_sq", j.rho2_sq), ("rho3_sq", j.rho3_sq),
        ("nu", n.nu), ("delta2", n.delta2), ("delta3", n.delta3),
    ):
        print(f"{key} = {fmt9(val)}")
    return 0


def _cmd_dkp(geom, args):
    vals = _parse_floats(args.joint, 3, "--joint")
    if min(vals) < 0.0:
        raise _CliError("squared leg lengths must be nonnegative")
    sols = solve_dkp(geom, JointSquares(*vals), args.tol)
    if not sols:
        print("no real assembly mode")
        return 2
    print(f"{len(sols)} solution(s)")
    for s in sols:
        print(
            f"psi = {fmt9(s.pose.psi)}  r = {fmt9(s.pose.r)}  g = {fmt9(s.pose.g)}  "
            f"t = {fmt9(s.t)}  mult = {s.multiplicity}  "
            f"on_s1 = {'yes' if s.on_s1 else 'no'}  on_s2 = {'yes' if s.on_s2 else 'no'}"
        )
    return 0


def _cmd_cusps(geom, args):
    out = _outdir(args)
    rows = []
    fig = SvgFigure()
    for c in cusp_points(geom):
        p = curve_c(geom, c.t_cusp)
        rows.append((c.k, c.psi_cusp, c.t_cusp, c.r_cusp, c.beta, p[0], p[1]))
        fig.dot(p, COLOR_CUSP, "cusp")
        print(
            f"k = {c.k}  psi = {fmt9(c.psi_cusp)}  t = {fmt9(c.t_cusp)}  "
            f"r = {fmt9(c.r_cusp)}  beta = {fmt9(c.beta)}"
        )
    csv_path = os.path.join(out, "cusps.csv")
    write_csv(csv_path, "k,psi,t,r,beta,delta2,delta3", rows)
    svg_path = os.path.join(out, "cusps.svg")
    fig.write(svg_path)
    print(f"wrote {csv_path} {svg_path}")
    return 0


def _closed_points(samples):
    pts = [s.point for s in samples]
    if pts:
        pts.append(pts[0])
    return pts


def _cmd_curve_c(geom, args):
    out = _outdir(args)
    samples = sample_curve_c(geom, args.samples)
    rows = [(math.tan(s.parameter), s.parameter, s.point[0], s.point[1]) for s in samples]
    csv_path = os.path.join(out, "curve_c.csv")
    write_csv(csv_path, "t,psi,delta2,delta3", rows)
    fig = SvgFigure()
    fig.polyline(_closed_points(samples), COLOR_S1, "curve-c")
    svg_path = os.path.join(out, "curve_c.svg")
    fig.write(svg_path)
    print(f"wrote {csv_path} {svg_path}")
    return 0


def _cmd_sigma_sections(geom, args):
    out = _outdir(args)
    rows = characteristic_section_rows(geom, args.samples)
    csv_path = os.path.join(out, "sigma_sections.csv")
    write_csv(csv_path, "psi,r_gamma,r_minus,r_plus", rows)
    fig = SvgFigure()
    fig.polyline([(r[0], r[1]) for r in rows], COLOR_S1, "gamma")
    fig.polyline([(r[0], r[2]) for r in rows], COLOR_CHAR, "characteristic-minus")
    fig.polyline([(r[0], r[3]) for r in rows], COLOR_CHAR, "characteristic-plus")
    svg_path = os.path.join(out, "sigma_sections.svg")
    fig.write(svg_path)
    print(f"wrote {csv_path} {svg_path}")
    return 0


def _cmd_slice(geom, args):
    out = _outdir(args)
    if args.rho1sq < 0.0:
        raise _CliError("--rho1sq must be nonnegative")
    s1_runs, s2 = sample_slice(geom, args.rho1sq, args.samples)
    rows = []
    for run in s1_runs:
        rows.extend((s.parameter, s.point[0], s.point[1]) for s in run)
    n_s1 = len(rows)
    rows.extend((s.parameter, s.point[0], s.point[1]) for s in s2)
    csv_path = os.path.join(out, "slice.csv")
    write_csv(
        csv_path,
        "param,rho2_sq,rho3_sq",
        rows,
    )
    fig = SvgFigure()
    for run in s1_runs:
        fig.polyline([s.point for s in run], COLOR_S1, "s1-slice")
    fig.polyline(_closed_points(s2), COLOR_S2, "s2-slice")
    try:
        n_cusps = count_cusps(geom, args.rho1sq, args.tol)
        note = f"{n_cusps} cusps"
    except OnBifurcationBoundary:
        note = "on bifurcation boundary"
    if rows:
        xs = [r[1] for r in rows]
        ys = [r[2] for r in rows]
        fig.text((min(xs), max(ys)), note)
    svg_path = os.path.join(out, "slice.svg")
    fig.write(svg_path)
    print(f"slice at rho1_sq = {fmt9(args.rho1sq)}: {note} "
          f"({n_s1} S1 samples, {len(s2)} S2 samples)")
    print(f"wrote {csv_path} {svg_path}")
    return 0


def _cmd_nu_section(geom, args):
    out = _outdir(args)
    c_samples, s2_runs = sample_nu_section(geom, args.nu, args.samples)
    rows = [("C", s.parameter, s.point[0], s.point[1]) for s in c_samples]
    for run in s2_runs:
        rows.extend(("S2-section", s.parameter, s.point[0], s.point[1]) for s in run)
    csv_path = os.path.join(out, "nu_section.csv")
    lines = ["locus,param,delta2,delta3"]
    for row in rows:
        lines.append(row[0] + "," + ",".join(fmt9(v) for v in row[1:]))
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    fig = SvgFigure()
    fig.polyline(_closed_points(c_samples), COLOR_S1, "curve-c")
    closed = len(s2_runs) == 1
    for run in s2_runs:
        pts = [s.point for s in run]
        if closed and pts:
            pts.append(pts[0])
        fig.polyline(pts, COLOR_S2, "s2-section")
    svg_path = os.path.join(out, "nu_section.svg")
    fig.write(svg_path)
    print(f"wrote {csv_path} {svg_path}")
    return 0


def _cmd_label(geom, args):
    pose = GlidePose(*_parse_floats(args.pose, 3, "--pose"))
    aspect = aspect_of(geom, pose, args.tol)
    label = label_pose(geom, pose, args.tol)
    print(f"label = {label}")
    print(f"g_sign = {aspect.g_sign:+d}")
    print(f"gamma_side = {aspect.gamma_side:+d}")
    return 0


def _print_report(report):
    print(f"validation: {'PASS' if report.passed else 'FAIL'}")
    arcs = " ".join(str(e.arc) for e in report.events)
    print(f"crossings = {len(report.events)}" + (f" (arcs: {arcs})" if arcs else ""))
    print(f"declared = {' '.join(str(a) for a in report.expected) or '-'}")
    print(f"endpoint_error = {fmt9(report.endpoint_error)}")
    print(f"min_g = {fmt9(report.min_g)}")
    if not report.passed:
        print(f"reason: {report.reason}")


def _plan_figure(geom, path, out):
    c_samples, s2_runs = sample_nu_section(geom, path.nu_level)
    rows = [("C", s.parameter, s.point[0], s.point[1]) for s in c_samples]
    for run in s2_runs:
        rows.extend(("S2-section", s.parameter, s.point[0], s.point[1]) for s in run)
    csv_path = os.path.join(out, "section.csv")
    lines = ["locus,param,delta2,delta3"]
    for row in rows:
        lines.append(row[0] + "," + ",".join(fmt9(v) for v in row[1:]))
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    fig = SvgFigure()
    fig.polyline(_closed_points(c_samples), COLOR_S1, "curve-c")
    closed = len(s2_runs) == 1
    for run in s2_runs:
        pts = [s.point for s in run]
        if closed and pts:
            pts.append(pts[0])
        fig.polyline(pts, COLOR_S2, "s2-section")
    fig.polyline([(w.delta2, w.delta3) for w in path.waypoints], COLOR_CUSP, "path")
    svg_path = os.path.join(out, "plan.svg")
    fig.write(svg_path)
    return csv_path, svg_path


def _cmd_plan(geom, args):
    out = _outdir(args)
    start = GlidePose(*_parse_floats(args.start, 3, "--start"))
    goal = GlidePose(*_parse_floats(args.goal, 3, "--goal"))
    opts = PlanOptions(tol=args.tol)
    path = plan(geom, start, goal, opts)
    report = validate(geom, path, start, goal, opts)
    path_csv = os.path.join(out, "path.csv")
    write_path_csv(path, geom, path_csv)
    section_csv, svg_path = _plan_figure(geom, path, out)
    print(f"nu_level = {fmt9(path.nu_level)}")
    print(f"waypoints = {len(path.waypoints)}")
    _print_report(report)
    print(f"wrote {path_csv} {section_csv} {svg_path}")
    return 0 if report.passed else 1


def _cmd_validate(geom_cli, args):
    path, geom = read_path_csv(args.path)
    start = GlidePose(*_parse_floats(args.start, 3, "--start")) if args.start else path.start
    goal = GlidePose(*_parse_floats(args.goal, 3, "--goal")) if args.goal else path.goal
    report = validate(geom, path, start, goal, PlanOptions(tol=args.tol))
    _print_report(report)
    return 0 if report.passed else 1


def _cmd_sweep(geom, args):
    out = _outdir(args)
    h_lo, h_hi, nh = _parse_range(args.h, "--h")
    d_lo, d_hi, nd = _parse_range(args.d, "--d")
    if args.b <= 0.0 or h_lo <= 0.0 or h_hi <= 0.0:
        raise _CliError("b and the h range must be positive")
    rows = bifurcation_sweep(args.b, (h_lo, h_hi), (d_lo, d_hi), (nh, nd))
    csv_path = os.path.join(out, "sweep.csv")
    write_csv(csv_path, "h,d,beta1,beta2,beta3", rows)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


_COMMANDS = {
    "ik": _cmd_ik,
    "dkp": _cmd_dkp,
    "cusps": _cmd_cusps,
    "curve-c": _cmd_curve_c,
    "sigma-sections": _cmd_sigma_sections,
    "slice": _cmd_slice,
    "nu-section": _cmd_nu_section,
    "label": _cmd_label,
    "plan": _cmd_plan,
    "validate": _cmd_validate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        geom = _load_geometry(args)
        return _COMMANDS[args.command](geom, args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KinematicsError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
