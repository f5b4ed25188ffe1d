"""Optimal controls, the maximized Hamiltonian and its extremal flows.

Two right-hand sides are available for the radial/angular frame:

* ``RhsKind.FULL``    -- the four Hamilton equations in closed form
  (:func:`hamilton_rhs`); other frames use :func:`general_rhs`.
* ``RhsKind.REDUCED`` -- ``q' = p`` with the same costate equations
  (:func:`reduced_rhs`), i.e. the system obtained after fixing ``|q| = 1``.

Integration is fixed-step RK4 (default) or adaptive RK45 (scipy's
Dormand-Prince stepper).  Constraint drift is reported, never projected out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import RK45

from .errors import DegenerateFrameError, GuardViolationError, MaxStepsExceededError
from .frames import EPS_DEG, Control, FrameField, PhasePoint, State

__all__ = [
    "RhsKind", "Method", "IntegratorConfig", "Trajectory", "ConservationReport",
    "optimal_controls", "hamiltonian", "hamilton_rhs", "general_rhs", "reduced_rhs",
    "integrate", "conservation_report", "terminal_state", "observed_order",
]


class RhsKind(enum.Enum):
    FULL = "full"
    REDUCED = "reduced"


class Method(enum.Enum):
    RK4 = "rk4"
    RK45 = "rk45"


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-3
    method: Method = Method.RK4
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be a positive integer")
        if not isinstance(self.method, Method):
            object.__setattr__(self, "method", Method(self.method))


# --- pointwise quantities ---------------------------------------------------

def _unpack(pt: PhasePoint):
    return pt.state.q1, pt.state.q2, pt.costate.p1, pt.costate.p2


def optimal_controls(frame: FrameField, pt: PhasePoint) -> Control:
    """Controls ``u_i = <p, f_i(q)>`` that extremize the pre-Hamiltonian."""
    frame.check(pt.state)
    p = pt.costate
    a = frame.f1(pt.state)
    b = frame.f2(pt.state)
    return Control(float(p.p1 * a[0] + p.p2 * a[1]), float(p.p1 * b[0] + p.p2 * b[1]))


def hamiltonian(frame: FrameField, pt: PhasePoint) -> float:
    """Maximized Hamiltonian ``(u1**2 + u2**2) / 2`` at the optimal controls."""
    return 0.5 * optimal_controls(frame, pt).norm2


def _paper_rhs(q1, q2, p1, p2):
    n = q1 * q1 + q2 * q2
    return (
        p1 * n,
        p2 * n,
        -q1 * (p1 * p1 - p2 * p2) - 2.0 * p1 * p2 * q2,
        -q2 * (p2 * p2 - p1 * p1) - 2.0 * p1 * p2 * q1,
    )


def _reduced_rhs(q1, q2, p1, p2):
    return (
        p1,
        p2,
        -q1 * (p1 * p1 - p2 * p2) - 2.0 * p1 * p2 * q2,
        -q2 * (p2 * p2 - p1 * p1) - 2.0 * p1 * p2 * q1,
    )


def _paper_admissible(q1, q2):
    return EPS_DEG < q1 * q1 + q2 * q2 < math.inf


def hamilton_rhs(pt: PhasePoint) -> np.ndarray:
    """Hamilton equations for the radial/angular frame, ``(q1', q2', p1', p2')``."""
    q1, q2, p1, p2 = _unpack(pt)
    if not _paper_admissible(q1, q2):
        raise DegenerateFrameError(
            f"frame 'paper' is degenerate at q=({q1:.17g}, {q2:.17g})",
            gram_det=(q1 * q1 + q2 * q2) ** 2)
    return np.array(_paper_rhs(q1, q2, p1, p2))


def general_rhs(frame: FrameField, pt: PhasePoint, *, jacobian_action: str = "transpose") -> np.ndarray:
    """Hamilton equations for an arbitrary frame, built from its Jacobians.

    ``q' = u1 f1 + u2 f2`` and ``p' = -u1 A1 p - u2 A2 p`` with ``A_i = J_i^T``
    (the costate equation ``p' = -dH/dq``).  ``jacobian_action="direct"`` uses
    ``A_i = J_i`` instead, which for the radial/angular frame reproduces
    :func:`hamilton_rhs` term for term.
    """
    if jacobian_action not in ("transpose", "direct"):
        raise ValueError(f"jacobian_action must be 'transpose' or 'direct', got {jacobian_action!r}")
    frame.check(pt.state)
    q = pt.state
    p = pt.costate.as_array()
    a = frame.f1(q)
    b = frame.f2(q)
    u1 = p[0] * a[0] + p[1] * a[1]
    u2 = p[0] * b[0] + p[1] * b[1]
    j1 = np.asarray(frame.jac1(q))
    j2 = np.asarray(frame.jac2(q))
    if jacobian_action == "transpose":
        j1, j2 = j1.T, j2.T
    qdot = u1 * np.asarray(a) + u2 * np.asarray(b)
    pdot = -u1 * (j1 @ p) - u2 * (j2 @ p)
    return np.concatenate([qdot, pdot])


def reduced_rhs(pt: PhasePoint) -> np.ndarray:
    """Reduced system ``q' = p`` with the costate equations expressed through ``q'``."""
    return np.array(_reduced_rhs(*_unpack(pt)))


# --- trajectories ------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray          # (n, 4) rows of q1, q2, p1, p2
    frame: FrameField
    kind: RhsKind
    config: IntegratorConfig

    def __len__(self):
        return len(self.times)

    @property
    def frame_name(self) -> str:
        return self.frame.name

    @cached_property
    def points(self) -> list[PhasePoint]:
        return [PhasePoint.from_values(*row) for row in self.states]

    @cached_property
    def controls(self) -> list[Control]:
        return [optimal_controls(self.frame, pt) for pt in self.points]

    @cached_property
    def control_array(self) -> np.ndarray:
        return np.array([(c.u1, c.u2) for c in self.controls]).reshape(-1, 2)

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        u = self.control_array
        return 0.5 * (u[:, 0] ** 2 + u[:, 1] ** 2)

    @property
    def final_state(self) -> State:
        return State(float(self.states[-1, 0]), float(self.states[-1, 1]))


def _rhs_for(kind: RhsKind, frame: FrameField) -> Callable:
    if kind is RhsKind.REDUCED:
        return _reduced_rhs
    if frame.name == "paper":
        # built-in radial/angular frame: use the closed-form equations
        return _paper_rhs

    def rhs(q1, q2, p1, p2):
        return tuple(general_rhs(frame, PhasePoint.from_values(q1, q2, p1, p2)))
    return rhs


def _admissible_for(frame: FrameField) -> Callable:
    if frame.name == "paper":
        return _paper_admissible
    return lambda q1, q2: frame.is_admissible((q1, q2))


def _fixed_grid(t0: float, t1: float, step: float, max_steps: int) -> list[float]:
    n = max(1, math.ceil((t1 - t0) / step - 1e-9))
    if n > max_steps:
        raise MaxStepsExceededError(
            f"{n} fixed steps of {step:g} needed on [{t0:g}, {t1:g}], max_steps={max_steps}")
    times = [t0 + k * step for k in range(n)]
    times.append(t1)
    return times


def _rk4_run(rhs, admissible, y, times, record):
    q1, q2, p1, p2 = y
    out = [(q1, q2, p1, p2)] if record else None
    for k in range(len(times) - 1):
        h = times[k + 1] - times[k]
        hh = 0.5 * h
        try:
            a = rhs(q1, q2, p1, p2)
            b = rhs(q1 + hh * a[0], q2 + hh * a[1], p1 + hh * a[2], p2 + hh * a[3])
            c = rhs(q1 + hh * b[0], q2 + hh * b[1], p1 + hh * b[2], p2 + hh * b[3])
            d = rhs(q1 + h * c[0], q2 + h * c[1], p1 + h * c[2], p2 + h * c[3])
        except DegenerateFrameError as exc:
            raise GuardViolationError(f"stage evaluation left the frame domain in step "
                                      f"[{times[k]:.17g}, {times[k + 1]:.17g}]: {exc}",
                                      time=times[k], gram_det=exc.gram_det) from exc
        w = h / 6.0
        q1 = q1 + w * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0])
        q2 = q2 + w * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1])
        p1 = p1 + w * (a[2] + 2.0 * b[2] + 2.0 * c[2] + d[2])
        p2 = p2 + w * (a[3] + 2.0 * b[3] + 2.0 * c[3] + d[3])
        if not (math.isfinite(q1 + q2 + p1 + p2) and admissible(q1, q2)):
            raise GuardViolationError(
                f"flow left the frame domain at t={times[k + 1]:.17g} "
                f"(q=({q1:.6g}, {q2:.6g}), p=({p1:.6g}, {p2:.6g}))", time=times[k + 1])
        if record:
            out.append((q1, q2, p1, p2))
    return out if record else (q1, q2, p1, p2)


def _rk45_run(rhs, admissible, y, t0, t1, cfg):
    solver = RK45(lambda t, v: np.array(rhs(*v)), t0, np.array(y, dtype=float), t1,
                  rtol=cfg.rel_tol, atol=cfg.abs_tol)
    times = [t0]
    rows = [tuple(y)]
    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            raise MaxStepsExceededError(f"RK45 exceeded max_steps={cfg.max_steps} at t={solver.t:.17g}")
        t_prev = solver.t
        try:
            msg = solver.step()
        except DegenerateFrameError as exc:
            raise GuardViolationError(f"stage evaluation left the frame domain after t={t_prev:.17g}: {exc}",
                                      time=float(t_prev), gram_det=exc.gram_det) from exc
        steps += 1
        if solver.status == "failed":
            raise GuardViolationError(f"RK45 failed at t={solver.t:.17g}: {msg}", time=solver.t)
        q1, q2, p1, p2 = (float(v) for v in solver.y)
        if not (math.isfinite(q1 + q2 + p1 + p2) and admissible(q1, q2)):
            raise GuardViolationError(
                f"flow left the frame domain at t={solver.t:.17g}", time=float(solver.t))
        times.append(float(solver.t))
        rows.append((q1, q2, p1, p2))
    times[-1] = t1
    return times, rows


def _check_start(frame, start, t0, t1):
    if not t1 > t0:
        raise ValueError(f"integration needs t1 > t0, got t0={t0}, t1={t1}")
    frame.check(start.state)


def integrate(kind: RhsKind, frame: FrameField, start: PhasePoint, t0: float, t1: float,
              cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate the extremal flow from ``start`` over ``[t0, t1]``.

    RK4 samples every ``cfg.step`` with the last step shortened to land on
    ``t1``; RK45 samples every accepted step.  Raises
    :class:`GuardViolationError` (with the failing time) if the flow leaves
    the frame's domain or stops being finite.
    """
    cfg = cfg or IntegratorConfig()
    kind = RhsKind(kind)
    _check_start(frame, start, t0, t1)
    rhs = _rhs_for(kind, frame)
    admissible = _admissible_for(frame)
    y0 = tuple(start.as_array().tolist())
    if cfg.method is Method.RK4:
        times = _fixed_grid(t0, t1, cfg.step, cfg.max_steps)
        rows = _rk4_run(rhs, admissible, y0, times, record=True)
    else:
        times, rows = _rk45_run(rhs, admissible, y0, t0, t1, cfg)
    return Trajectory(np.array(times), np.array(rows, dtype=float), frame, kind, cfg)


def terminal_state(kind: RhsKind, frame: FrameField, start: PhasePoint, t0: float, t1: float,
                   cfg: IntegratorConfig | None = None) -> tuple[float, float, float, float]:
    """Endpoint of :func:`integrate` without materializing the samples.

    Bit-identical to the last row of ``integrate(...).states`` for RK4.
    """
    cfg = cfg or IntegratorConfig()
    kind = RhsKind(kind)
    _check_start(frame, start, t0, t1)
    rhs = _rhs_for(kind, frame)
    admissible = _admissible_for(frame)
    y0 = tuple(start.as_array().tolist())
    if cfg.method is Method.RK4:
        return _rk4_run(rhs, admissible, y0, _fixed_grid(t0, t1, cfg.step, cfg.max_steps), record=False)
    _, rows = _rk45_run(rhs, admissible, y0, t0, t1, cfg)
    return rows[-1]


# --- diagnostics -------------------------------------------------------------

@dataclass(frozen=True)
class ConservationReport:
    hamiltonian_drift: float        # max |H(t) - H(t0)|
    control_norm2_drift: float      # max ||u(t)|^2 - |u(t0)|^2|
    control_norm_drift: float       # max ||u(t)| - |u(t0)||
    qnorm2_drift: float             # max |(q1^2+q2^2)(t) - (q1^2+q2^2)(t0)|
    unit_circle_residual: float     # max |q1^2 + q2^2 - 1|
    identity_residual: float | None = field(default=None)  # radial/angular frame only

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def conservation_report(traj: Trajectory) -> ConservationReport:
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    u = traj.control_array
    un2 = u[:, 0] ** 2 + u[:, 1] ** 2
    h = traj.hamiltonian
    s = traj.states
    qn2 = s[:, 0] ** 2 + s[:, 1] ** 2
    identity = None
    if traj.frame.name == "paper":
        pn2 = s[:, 2] ** 2 + s[:, 3] ** 2
        identity = float(np.max(np.abs(un2 - qn2 * pn2)))
    return ConservationReport(
        hamiltonian_drift=float(np.max(np.abs(h - h[0]))),
        control_norm2_drift=float(np.max(np.abs(un2 - un2[0]))),
        control_norm_drift=float(np.max(np.abs(np.sqrt(un2) - math.sqrt(un2[0])))),
        qnorm2_drift=float(np.max(np.abs(qn2 - qn2[0]))),
        unit_circle_residual=float(np.max(np.abs(qn2 - 1.0))),
        identity_residual=identity,
    )


def observed_order(kind: RhsKind, frame: FrameField, start: PhasePoint, t0: float, t1: float,
                   steps: Sequence[float] = (4e-3, 2e-3, 1e-3)) -> float:
    """Richardson estimate of the RK4 convergence order from three halving steps."""
    h0, h1, h2 = steps
    if not (math.isclose(h0 / h1, 2.0) and math.isclose(h1 / h2, 2.0)):
        raise ValueError("steps must halve successively")
    ends = [np.array(terminal_state(kind, frame, start, t0, t1, IntegratorConfig(step=h)))
            for h in steps]
    coarse = np.linalg.norm(ends[0] - ends[1])
    fine = np.linalg.norm(ends[1] - ends[2])
    return math.log2(coarse / fine)
