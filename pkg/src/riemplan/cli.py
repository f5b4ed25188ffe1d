"""Command-line front end.

Vectors are comma-separated pairs without spaces; pass negative leading
values with ``=``, e.g. ``--q0=-1,0``.  Exit status is 0 on success, 1 on
domain errors (degenerate frame, out-of-range closed form, ...) and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import math
import sys
from typing import Sequence

import numpy as np

from . import checks, closed_form, curvature, flow, planner
from .errors import DegenerateFrameError, DomainError, MaxStepsExceededError
from .frames import FRAME_NAMES, PhasePoint, State, builtin_frame
from .serialize import (dump_json, fmt, trajectory_to_json, write_csv,
                        write_trajectory_csv)

CLOSEDFORM_COLUMNS = ("t", "q1", "q2", "p1", "p2", "u1", "u2", "unorm2", "qnorm2",
                      "theta", "theta_dot", "kappa_g")
CURVATURE_COLUMNS = ("q1", "q2", "c1", "c2", "kappa", "bracket1", "bracket2", "gram_det")


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    try:
        a, b = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number pair: {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return a, b


def _box(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("grid box must be q1min,q1max,q2min,q2max")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number box: {text!r}") from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _add_output(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--out", "-o", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def _add_integrator(p: argparse.ArgumentParser) -> None:
    d = flow.IntegratorConfig()
    p.add_argument("--step", type=_positive, default=d.step, help="RK4 step (default %(default)g)")
    p.add_argument("--method", choices=[m.value for m in flow.Method], default=d.method.value)
    p.add_argument("--rtol", type=_positive, default=d.rel_tol, help="RK45 relative tolerance")
    p.add_argument("--atol", type=_positive, default=d.abs_tol, help="RK45 absolute tolerance")
    p.add_argument("--max-steps", type=_positive_int, default=d.max_steps)
    p.add_argument("--kind", choices=[k.value for k in flow.RhsKind], default="full")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riemplan", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="integrate the extremal flow and write a trajectory table")
    p.add_argument("--frame", choices=FRAME_NAMES, default="paper")
    p.add_argument("--q0", type=_pair, required=True)
    p.add_argument("--p0", type=_pair, required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    _add_integrator(p)
    _add_output(p, "csv")

    p = sub.add_parser("closedform", help="sample the analytic extremal, controls and curvature")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, default=0.0)
    p.add_argument("--c3", type=float, default=0.0)
    p.add_argument("--t", type=float, help="single sample time (overrides --t0/--t1/--samples)")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--samples", type=_positive_int, default=101)
    _add_output(p, "csv")

    p = sub.add_parser("curvature", help="structure functions and Gaussian curvature of a frame")
    p.add_argument("--frame", choices=FRAME_NAMES, default="paper")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=_pair, help="evaluation point")
    g.add_argument("--grid", type=_box, help="q1min,q1max,q2min,q2max")
    p.add_argument("--n", type=_positive_int, default=11, help="grid points per axis")
    _add_output(p, "json")

    p = sub.add_parser("plan", help="shoot from q0 to a goal over a fixed horizon")
    d = planner.ShootingConfig()
    p.add_argument("--frame", choices=FRAME_NAMES, default="paper")
    p.add_argument("--q0", type=_pair, required=True)
    p.add_argument("--goal", type=_pair, required=True)
    p.add_argument("--horizon", type=float, default=d.horizon)
    p.add_argument("--tol", type=_positive, default=d.tol)
    p.add_argument("--max-iters", type=_positive_int, default=d.max_iters)
    p.add_argument("--fd-step", type=_positive, default=d.fd_step)
    p.add_argument("--multistart", type=_positive_int, default=d.multistart)
    _add_integrator(p)
    _add_output(p, "json")

    p = sub.add_parser("check", help="run the built-in identity suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _integrator_config(args) -> flow.IntegratorConfig:
    return flow.IntegratorConfig(step=args.step, method=flow.Method(args.method), rel_tol=args.rtol,
                                 abs_tol=args.atol, max_steps=args.max_steps)


def _integrator_meta(args) -> dict:
    return {"kind": args.kind, "method": args.method, "step": args.step, "rtol": args.rtol,
            "atol": args.atol, "max_steps": args.max_steps}


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cmd_integrate(args) -> int:
    frame = builtin_frame(args.frame)
    start = PhasePoint.from_values(*args.q0, *args.p0)
    traj = flow.integrate(flow.RhsKind(args.kind), frame, start, args.t0, args.t1, _integrator_config(args))
    meta = {"command": "integrate", "frame": args.frame, "q0": "%s,%s" % tuple(map(fmt, args.q0)),
            "p0": "%s,%s" % tuple(map(fmt, args.p0)), "t0": args.t0, "t1": args.t1, **_integrator_meta(args)}
    with _open_out(args.out) as out:
        if args.format == "csv":
            write_trajectory_csv(out, traj, meta)
        else:
            report = flow.conservation_report(traj)
            dump_json({"run": meta, "trajectory": trajectory_to_json(traj),
                       "conservation": report.as_dict()}, out)
    return 0


def _closedform_row(params, t) -> list[float]:
    pt = closed_form.phase_at(params, t)
    u = closed_form.controls_at(params, t)
    q1, q2, p1, p2 = pt.as_array()
    try:
        theta = closed_form.theta_at(params, t)
        theta_dot = closed_form.theta_dot_at(params, t)
        kappa_g = closed_form.kappa_g_at(params, t)
    except DomainError:
        # heading undefined where |u1| > 1 (or singular at |u1| = 1)
        theta = theta_dot = kappa_g = math.nan
    return [t, q1, q2, p1, p2, u.u1, u.u2, u.norm2, q1 * q1 + q2 * q2, theta, theta_dot, kappa_g]


def _cmd_closedform(args) -> int:
    params = closed_form.ClosedFormParams(args.c1, args.c2, args.c3)
    if args.t is not None:
        times = [args.t]
    else:
        times = np.linspace(args.t0, args.t1, args.samples).tolist()
    rows = [_closedform_row(params, t) for t in times]
    meta = {"command": "closedform", "c1": args.c1, "c2": args.c2, "c3": args.c3}
    with _open_out(args.out) as out:
        if args.format == "csv":
            write_csv(out, CLOSEDFORM_COLUMNS, rows, meta)
        else:
            dump_json({"run": meta, "rows": [dict(zip(CLOSEDFORM_COLUMNS, r)) for r in rows]}, out)
    return 0


def _curvature_record(frame, q) -> dict:
    sd = curvature.structure_functions(frame, q)
    kappa = curvature.gaussian_curvature(frame, q)
    return {"q": {"q1": q[0], "q2": q[1]}, "c1": sd.c1, "c2": sd.c2, "kappa": kappa,
            "bracket": [float(b) for b in sd.bracket], "gram_det": sd.gram_det}


def _cmd_curvature(args) -> int:
    frame = builtin_frame(args.frame)
    if args.q is not None:
        points = [args.q]
    else:
        a, b, c, d = args.grid
        points = [(x, y) for x in np.linspace(a, b, args.n) for y in np.linspace(c, d, args.n)]
    records = [_curvature_record(frame, q) for q in points]
    with _open_out(args.out) as out:
        if args.format == "json":
            body = records[0] if args.q is not None else {"points": records}
            dump_json({"frame": args.frame, **body}, out)
        else:
            rows = [[r["q"]["q1"], r["q"]["q2"], r["c1"], r["c2"], r["kappa"], *r["bracket"], r["gram_det"]]
                    for r in records]
            write_csv(out, CURVATURE_COLUMNS, rows, {"command": "curvature", "frame": args.frame})
    return 0


def _cmd_plan(args) -> int:
    frame = builtin_frame(args.frame)
    cfg = planner.ShootingConfig(tol=args.tol, max_iters=args.max_iters, fd_step=args.fd_step,
                                 multistart=args.multistart, integrator=_integrator_config(args),
                                 horizon=args.horizon, kind=flow.RhsKind(args.kind))
    result = planner.plan(frame, State(*args.q0), State(*args.goal), cfg)
    meta = {"command": "plan", "frame": args.frame, "q0": "%s,%s" % tuple(map(fmt, args.q0)),
            "goal": "%s,%s" % tuple(map(fmt, args.goal)), "horizon": args.horizon, "tol": args.tol,
            "max_iters": args.max_iters, "fd_step": args.fd_step, "multistart": args.multistart,
            **_integrator_meta(args)}
    summary = {"p0": {"p1": result.p0.p1, "p2": result.p0.p2}, "residual": result.residual,
               "iterations": result.iterations, "converged": result.converged,
               "seed_index": result.seed_index}
    with _open_out(args.out) as out:
        if args.format == "json":
            dump_json({"run": meta, **summary, "trajectory": trajectory_to_json(result.trajectory)}, out)
        else:
            flat = {"p0": f"{fmt(result.p0.p1)},{fmt(result.p0.p2)}", "residual": result.residual,
                    "iterations": result.iterations, "converged": result.converged,
                    "seed_index": result.seed_index}
            write_trajectory_csv(out, result.trajectory, {**meta, **flat})
    return 0 if result.converged else 1


def _cmd_check(args) -> int:
    results = checks.run_suite(seed=args.seed)
    failed = [r for r in results if r.gating and not r.passed]
    if args.format == "json":
        dump_json({"results": [{"name": r.name, "value": r.value, "tolerance": r.tolerance,
                                "gating": r.gating, "passed": r.passed, "note": r.note}
                               for r in results],
                   "passed": not failed}, sys.stdout)
    else:
        for r in results:
            status = ("PASS" if r.passed else "FAIL") if r.gating else "INFO"
            line = f"{status:4}  {r.name:32} {r.value:.3e}  tol {r.tolerance:.1e}"
            print(line + (f"  ({r.note})" if r.note else ""))
        print("all gating checks passed" if not failed else f"{len(failed)} gating check(s) failed")
    return 1 if failed else 0


_COMMANDS = {
    "integrate": _cmd_integrate,
    "closedform": _cmd_closedform,
    "curvature": _cmd_curvature,
    "plan": _cmd_plan,
    "check": _cmd_check,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (DegenerateFrameError, DomainError, MaxStepsExceededError, ValueError) as exc:
        print(f"riemplan {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        code = 0
    sys.exit(code)
