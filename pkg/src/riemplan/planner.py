"""Two-point steering by shooting on the initial costate.

The endpoint map ``p0 -> q(T)`` of the extremal flow is inverted with a
damped Newton iteration (forward-difference Jacobian) started from several
seeds whose initial control has unit norm.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GuardViolationError
from .flow import IntegratorConfig, RhsKind, Trajectory, integrate, terminal_state
from .frames import Costate, FrameField, PhasePoint, State

log = logging.getLogger(__name__)

MAX_HALVINGS = 8


@dataclass(frozen=True)
class ShootingConfig:
    tol: float = 1e-9
    max_iters: int = 50
    fd_step: float = 1e-6
    multistart: int = 8
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    horizon: float = 1.0
    kind: RhsKind = RhsKind.FULL

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.multistart < 1 or self.max_iters < 1:
            raise ValueError("multistart and max_iters must be >= 1")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        if not self.horizon >= 0:
            raise ValueError("horizon must be nonnegative")
        object.__setattr__(self, "kind", RhsKind(self.kind))


@dataclass(frozen=True)
class PlanResult:
    p0: Costate
    trajectory: Trajectory
    residual: float
    iterations: int
    converged: bool
    seed_index: int


def residual(q_end: Sequence[float], q_goal: Sequence[float]) -> float:
    return math.hypot(q_end[0] - q_goal[0], q_end[1] - q_goal[1])


def shoot(frame: FrameField, q0: State, p0: Costate, cfg: ShootingConfig | None = None) -> State:
    """Terminal state of the flow from ``(q0, p0)`` after ``cfg.horizon``."""
    cfg = cfg or ShootingConfig()
    frame.check(q0)
    if cfg.horizon == 0:
        return q0
    end = terminal_state(cfg.kind, frame, PhasePoint(q0, p0), 0.0, cfg.horizon, cfg.integrator)
    return State(end[0], end[1])


def seed_costates(frame: FrameField, q0: State, count: int) -> list[Costate]:
    """Costates on rays ``phi = 2 pi k / count`` scaled so that ``|u(0)| = 1``."""
    a = np.asarray(frame.f1(q0), dtype=float)
    b = np.asarray(frame.f2(q0), dtype=float)
    seeds = []
    for k in range(count):
        phi = 2.0 * math.pi * k / count
        d = np.array([math.cos(phi), math.sin(phi)])
        scale = 1.0 / math.hypot(d @ a, d @ b)
        seeds.append(Costate(float(scale * d[0]), float(scale * d[1])))
    return seeds


@dataclass
class _SeedRun:
    index: int
    p: np.ndarray
    res: float
    iterations: int


def _newton(frame, q0, goal, p_start, cfg, index):
    goal = np.asarray(goal, dtype=float)

    def miss(p):
        try:
            end = shoot(frame, q0, Costate(float(p[0]), float(p[1])), cfg)
        except (GuardViolationError, ValueError):
            return None
        return np.array([end.q1, end.q2]) - goal

    p = np.array([p_start.p1, p_start.p2])
    f = miss(p)
    if f is None:
        log.debug("seed %d discarded: flow leaves the domain", index)
        return None
    norm = float(np.hypot(*f))
    it = 0
    while norm > cfg.tol and it < cfg.max_iters:
        jac = np.empty((2, 2))
        for j in range(2):
            pj = p.copy()
            pj[j] += cfg.fd_step
            fj = miss(pj)
            if fj is None:
                return _SeedRun(index, p, norm, it)
            jac[:, j] = (fj - f) / cfg.fd_step
        try:
            delta = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(jac, -f, rcond=None)[0]
        it += 1
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = p + lam * delta
            ft = miss(trial)
            if ft is not None and np.hypot(*ft) < norm:
                p, f, norm = trial, ft, float(np.hypot(*ft))
                break
            lam *= 0.5
        else:
            log.debug("seed %d stalled after %d iterations (residual %.3e)", index, it, norm)
            break
    return _SeedRun(index, p, norm, it)


def plan(frame: FrameField, q0: State, q_goal: State, cfg: ShootingConfig | None = None) -> PlanResult:
    """Find an initial costate steering ``q0`` to ``q_goal`` over ``cfg.horizon``.

    Every seed runs to completion; among converged seeds the one with the
    fewest iterations wins (then smaller ``|p0|``, then seed order), otherwise
    the smallest residual is reported with ``converged=False``.
    """
    cfg = cfg or ShootingConfig()
    frame.check(q0)
    frame.check(q_goal)
    seeds = seed_costates(frame, q0, cfg.multistart)

    if cfg.horizon == 0:
        traj = Trajectory(np.array([0.0]), np.array([[q0.q1, q0.q2, seeds[0].p1, seeds[0].p2]]),
                          frame, cfg.kind, cfg.integrator)
        res = residual(q0, q_goal)
        return PlanResult(seeds[0], traj, res, 0, res <= cfg.tol, 0)

    runs = [r for i, s in enumerate(seeds) if (r := _newton(frame, q0, q_goal, s, cfg, i)) is not None]
    if not runs:
        raise GuardViolationError("every shooting seed left the frame domain", time=0.0)
    converged = [r for r in runs if r.res <= cfg.tol]
    if converged:
        best = min(converged, key=lambda r: (r.iterations, float(np.hypot(*r.p)), r.index))
    else:
        best = min(runs, key=lambda r: (r.res, r.index))
    p0 = Costate(float(best.p[0]), float(best.p[1]))
    traj = integrate(cfg.kind, frame, PhasePoint(q0, p0), 0.0, cfg.horizon, cfg.integrator)
    return PlanResult(p0, traj, best.res, best.iterations, best.res <= cfg.tol, best.index)
