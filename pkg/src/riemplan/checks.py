"""Built-in identity suite run by ``riemplan check``.

Each check reports a residual and the tolerance it must stay under.  Checks
with ``gating=False`` are informational: their residual is printed but does
not affect the exit status.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import closed_form, curvature, flow, frames, planner


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    gating: bool = True
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


PARAM_GRID = [closed_form.ClosedFormParams(c1, c2, c3)
              for c1, c2, c3 in itertools.product((0.5, 1.0, 2.0), (0.0, 0.3), (0.0, 1.0))]
SAMPLE_TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)
FD_TIME_STEP = 1e-5


def _random_phase_points(rng, n, lo=0.1, hi=10.0):
    # radii log-uniform in [lo, hi], angles uniform
    rq = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    rp = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    aq = rng.uniform(0, 2 * math.pi, n)
    ap = rng.uniform(0, 2 * math.pi, n)
    return np.column_stack([rq * np.cos(aq), rq * np.sin(aq), rp * np.cos(ap), rp * np.sin(ap)])


def check_control_norm_identity(rng, n=10_000):
    pf = frames.paper_frame()
    worst = 0.0
    for q1, q2, p1, p2 in _random_phase_points(rng, n):
        u = flow.optimal_controls(pf, frames.PhasePoint.from_values(q1, q2, p1, p2))
        rhs = (p1 * p1 + p2 * p2) * (q1 * q1 + q2 * q2)
        worst = max(worst, abs(u.norm2 - rhs) / rhs)
    return CheckResult("control_norm_identity", worst, 1e-12)


def check_rhs_agreement(rng, n=1000):
    pf = frames.paper_frame()
    worst = 0.0
    for row in rng.uniform(-1, 1, (n, 4)):
        pt = frames.PhasePoint.from_values(*row)
        if not pf.is_admissible(pt.state):
            continue
        diff = flow.general_rhs(pf, pt, jacobian_action="direct") - flow.hamilton_rhs(pt)
        worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("rhs_direct_agreement", worst, 1e-14)


def check_conservation():
    pf = frames.paper_frame()
    traj = flow.integrate(flow.RhsKind.FULL, pf, frames.PhasePoint.from_values(1, 0, 0, 1), 0.0, 1.0)
    h = float(np.max(np.abs(traj.hamiltonian - 0.5)))
    u = traj.control_array
    unorm = float(np.max(np.abs(np.hypot(u[:, 0], u[:, 1]) - 1.0)))
    return [CheckResult("hamiltonian_drift", h, 1e-9),
            CheckResult("control_norm_drift", unorm, 1e-8)]


def check_rk4_order():
    order = flow.observed_order(flow.RhsKind.FULL, frames.paper_frame(),
                                frames.PhasePoint.from_values(1, 0, 0, 1), 0.0, 1.0)
    return CheckResult("rk4_order_deviation", abs(order - 4.0), 0.2, note=f"order={order:.4f}")


def check_closed_form():
    speed = clairaut = costate = 0.0
    h = FD_TIME_STEP
    for params, t in itertools.product(PARAM_GRID, SAMPLE_TIMES):
        plus = closed_form.phase_at(params, t + h).state
        minus = closed_form.phase_at(params, t - h).state
        v1 = (plus.q1 - minus.q1) / (2 * h)
        v2 = (plus.q2 - minus.q2) / (2 * h)
        speed = max(speed, abs(v1 * v1 + v2 * v2 - 1.0))
        pt = closed_form.phase_at(params, t)
        clairaut = max(clairaut, abs(pt.state.q1 * pt.costate.p2 - params.c1) / abs(params.c1))
        costate = max(costate, abs(pt.costate.p1 ** 2 + pt.costate.p2 ** 2 - 1.0))
    return [CheckResult("unit_speed", speed, 1e-6),
            CheckResult("clairaut_integral", clairaut, 1e-12),
            CheckResult("costate_norm", costate, 1e-14)]


def check_reduced_flow():
    worst = 0.0
    for params in PARAM_GRID:
        end = flow.terminal_state(flow.RhsKind.REDUCED, frames.paper_frame(),
                                  closed_form.phase_at(params, 0.0), 0.0, 1.0)
        target = closed_form.phase_at(params, 1.0).state
        worst = max(worst, math.hypot(end[0] - target.q1, end[1] - target.q2))
    return CheckResult("reduced_flow_reproduction", worst, 1e-6, gating=False,
                       note="known mismatch: the analytic extremals do not solve the reduced system")


def check_curvature(rng, n_paper=200, n_known=50):
    pf = frames.paper_frame()
    bracket = kappa = 0.0
    for _ in range(n_paper):
        r = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        a = rng.uniform(0, 2 * math.pi)
        q = (r * math.cos(a), r * math.sin(a))
        bracket = max(bracket, float(np.linalg.norm(curvature.lie_bracket(pf, q))))
        kappa = max(kappa, abs(curvature.gaussian_curvature(pf, q)))
    hp = frames.builtin_frame("halfplane")
    gr = frames.builtin_frame("grushin")
    half = max(abs(curvature.gaussian_curvature(hp, (rng.uniform(-5, 5), rng.uniform(0.5, 5))) + 1.0)
               for _ in range(n_known))
    grush = 0.0
    for _ in range(n_known):
        q = (rng.uniform(0.5, 5), rng.uniform(-5, 5))
        grush = max(grush, abs(curvature.gaussian_curvature(gr, q) + 2.0 / q[0] ** 2))
    return [CheckResult("paper_bracket", bracket, 1e-7),
            CheckResult("paper_gaussian_curvature", kappa, 1e-6),
            CheckResult("halfplane_gaussian_curvature", half, 1e-5),
            CheckResult("grushin_gaussian_curvature", grush, 1e-4)]


def check_geodesic_curvature():
    params = closed_form.ClosedFormParams(1.0, 0.0, 0.0)
    spot = abs(closed_form.kappa_g_at(params, 0.0) + 2.0)
    gap = max(abs(closed_form.kappa_g_at(params, t) - closed_form.theta_dot_at(params, t))
              for t in (-0.3, -0.1, 0.0, 0.1, 0.25))
    return [CheckResult("kappa_g_spot", spot, 1e-9),
            CheckResult("kappa_g_minus_theta_dot", gap, 0.0)]


def check_planner(n=4):
    pf = frames.paper_frame()
    q0 = frames.State(1.0, 0.0)
    worst = 0.0
    for k in range(n):
        phi = 2 * math.pi * (k + 0.25) / n
        goal = planner.shoot(pf, q0, frames.Costate(math.cos(phi), math.sin(phi)))
        worst = max(worst, planner.plan(pf, q0, goal).residual)
    return CheckResult("planner_inverse_crime", worst, 1e-6)


def run_suite(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [check_control_norm_identity(rng), check_rhs_agreement(rng)]
    results += check_conservation()
    results.append(check_rk4_order())
    results += check_closed_form()
    results.append(check_reduced_flow())
    results += check_curvature(rng)
    results += check_geodesic_curvature()
    results.append(check_planner())
    return results
