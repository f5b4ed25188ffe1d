"""Frame calculus in the plane: brackets, structure functions, curvatures.

For a frame ``(f1, f2)`` the structure functions are the coefficients of
``[f1, f2] = c1 f1 + c2 f2``.  The Gaussian curvature of the metric in which
the frame is orthonormal is ``f1(c2) - f2(c1) - c1**2 - c2**2`` and the
geodesic curvature of a unit-speed curve with heading ``theta`` is
``theta' - c1 cos(theta) - c2 sin(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .frames import FrameField, fd_step

ORTHOGONALITY_TOL = 1e-12


@dataclass(frozen=True)
class StructureData:
    bracket: np.ndarray
    c1: float
    c2: float
    gram_det: float


def lie_bracket(frame: FrameField, q: Sequence[float]) -> np.ndarray:
    """``[f1, f2] = J2 f1 - J1 f2`` at ``q``."""
    frame.check(q)
    a = np.asarray(frame.f1(q), dtype=float)
    b = np.asarray(frame.f2(q), dtype=float)
    return np.asarray(frame.jac2(q)) @ a - np.asarray(frame.jac1(q)) @ b


def structure_functions(frame: FrameField, q: Sequence[float]) -> StructureData:
    bracket = lie_bracket(frame, q)
    a = np.asarray(frame.f1(q), dtype=float)
    b = np.asarray(frame.f2(q), dtype=float)
    aa, bb, ab = a @ a, b @ b, a @ b
    gram = float(aa * bb - ab * ab)
    if abs(ab) <= ORTHOGONALITY_TOL * math.sqrt(aa * bb):
        c1 = float(bracket @ a / aa)
        c2 = float(bracket @ b / bb)
    else:
        c1, c2 = (float(c) for c in np.linalg.solve(np.column_stack([a, b]), bracket))
    return StructureData(bracket=bracket, c1=c1, c2=c2, gram_det=gram)


def _directional(frame: FrameField, q: np.ndarray, v: np.ndarray, which: str) -> float:
    # derivative of c1 or c2 along the field v, stepping along v/|v|
    norm = math.hypot(v[0], v[1])
    d = v / norm
    h = fd_step(q)
    plus = getattr(structure_functions(frame, q + h * d), which)
    minus = getattr(structure_functions(frame, q - h * d), which)
    return norm * (plus - minus) / (2.0 * h)


def gaussian_curvature(frame: FrameField, q: Sequence[float]) -> float:
    """Gaussian curvature of the metric making ``frame`` orthonormal.

    Derivatives of the structure functions along ``f1``/``f2`` are central
    differences; every stencil point must lie in the frame's domain.
    """
    q = np.asarray(q, dtype=float)
    sd = structure_functions(frame, q)
    f1_c2 = _directional(frame, q, np.asarray(frame.f1(q), dtype=float), "c2")
    f2_c1 = _directional(frame, q, np.asarray(frame.f2(q), dtype=float), "c1")
    return f1_c2 - f2_c1 - sd.c1 ** 2 - sd.c2 ** 2


def geodesic_curvature(theta_dot: float, theta: float, c1: float, c2: float) -> float:
    return theta_dot - c1 * math.cos(theta) - c2 * math.sin(theta)
