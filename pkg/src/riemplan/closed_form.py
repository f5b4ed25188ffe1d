"""Analytic extremals parametrized by three integration constants.

With ``s = t + c2`` and ``r = sqrt(s**2 + c1**2)``::

    q1 = r                      p1 = s / r
    q2 = c1 * asinh(s / |c1|) + c3
    p2 = c1 / r

``asinh`` replaces ``log((s + r) / c1)`` so that negative ``c1`` is allowed
(the ``|c1|`` keeps ``q2' = c1 / q1`` for either sign);
``c1 == 0`` is the straight-line limit ``q = (|s|, c3)``, ``p = (sign s, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curvature import geodesic_curvature, structure_functions
from .errors import DegenerateParametersError, DomainError, SingularityError
from .frames import Control, PhasePoint, paper_frame

EPS_CLAMP = 1e-12


@dataclass(frozen=True)
class ClosedFormParams:
    c1: float
    c2: float = 0.0
    c3: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _shift(params: ClosedFormParams, t: float) -> float:
    s = t + params.c2
    if params.c1 == 0.0 and s == 0.0:
        raise DegenerateParametersError(
            f"c1 = 0 and t + c2 = 0 (t={t!r}): the straight-line limit has a kink here")
    return s


def phase_at(params: ClosedFormParams, t: float) -> PhasePoint:
    s = _shift(params, t)
    c1, c3 = params.c1, params.c3
    if c1 == 0.0:
        return PhasePoint.from_values(abs(s), c3, math.copysign(1.0, s), 0.0)
    r = math.hypot(s, c1)
    return PhasePoint.from_values(r, c1 * math.asinh(s / abs(c1)) + c3, s / r, c1 / r)


def q2_log_form(params: ClosedFormParams, t: float) -> float:
    """``c1 * log((s + r) / c1) + c3``; only defined for ``c1 > 0``."""
    if not params.c1 > 0:
        raise DomainError("the logarithmic form needs c1 > 0")
    s = t + params.c2
    r = math.hypot(s, params.c1)
    return params.c1 * math.log((s + r) / params.c1) + params.c3


def controls_at(params: ClosedFormParams, t: float) -> Control:
    pt = phase_at(params, t)
    q1, q2 = pt.state.q1, pt.state.q2
    p1, p2 = pt.costate.p1, pt.costate.p2
    return Control(p1 * q1 + p2 * q2, p1 * q2 - p2 * q1)


def u1_dot_at(params: ClosedFormParams, t: float) -> float:
    """Time derivative of ``u1 = s + c1 * q2 / r``."""
    s = _shift(params, t)
    c1 = params.c1
    if c1 == 0.0:
        return 1.0
    r2 = s * s + c1 * c1
    r = math.sqrt(r2)
    q2 = c1 * math.asinh(s / abs(c1)) + params.c3
    return 1.0 + c1 * c1 / r2 - c1 * s * q2 / (r2 * r)


def _clamped_u1(params: ClosedFormParams, t: float) -> float:
    u1 = controls_at(params, t).u1
    if abs(u1) > 1.0 + EPS_CLAMP:
        raise DomainError(
            f"|u1| = {abs(u1):.17g} > 1 at t={t!r}: outside the unit-control regime")
    return max(-1.0, min(1.0, u1))


def theta_at(params: ClosedFormParams, t: float) -> float:
    """Heading angle with ``u1 = cos(theta)``."""
    return math.acos(_clamped_u1(params, t))


def theta_dot_at(params: ClosedFormParams, t: float) -> float:
    u1 = _clamped_u1(params, t)
    denom = math.sqrt(1.0 - u1 * u1)
    if denom == 0.0:
        raise SingularityError(f"|u1| = 1 at t={t!r}: heading rate is singular")
    return -u1_dot_at(params, t) / denom


def kappa_g_at(params: ClosedFormParams, t: float) -> float:
    """Geodesic curvature of the analytic extremal in the radial/angular frame."""
    theta_dot = theta_dot_at(params, t)
    theta = theta_at(params, t)
    sd = structure_functions(paper_frame(), phase_at(params, t).state)
    return geodesic_curvature(theta_dot, theta, sd.c1, sd.c2)
