"""State/costate value types and orthogonal frame fields on the plane.

A frame is a pair of vector fields ``f1, f2`` together with their Jacobians
``jac1, jac2`` (row ``i`` holds the gradient of component ``i``) and a domain
predicate.  Evaluators accept any length-2 sequence ``q`` (a :class:`State`,
a tuple or an ndarray) and return ndarrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateFrameError, UnknownFrameError

EPS_DEG = 1e-9

VectorField = Callable[[Sequence[float]], np.ndarray]
JacobianField = Callable[[Sequence[float]], np.ndarray]
Guard = Callable[[Sequence[float]], bool]


def _require_finite(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not math.isfinite(value):
            raise ValueError(f"{type(obj).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class State:
    q1: float
    q2: float

    def __post_init__(self):
        _require_finite(self, ("q1", "q2"))

    def __iter__(self):
        yield self.q1
        yield self.q2

    def __len__(self):
        return 2

    def __getitem__(self, i):
        return (self.q1, self.q2)[i]

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2])


@dataclass(frozen=True, slots=True)
class Costate:
    p1: float
    p2: float

    def __post_init__(self):
        _require_finite(self, ("p1", "p2"))

    def __iter__(self):
        yield self.p1
        yield self.p2

    def __len__(self):
        return 2

    def __getitem__(self, i):
        return (self.p1, self.p2)[i]

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2])


@dataclass(frozen=True, slots=True)
class PhasePoint:
    state: State
    costate: Costate

    @classmethod
    def from_values(cls, q1: float, q2: float, p1: float, p2: float) -> "PhasePoint":
        return cls(State(float(q1), float(q2)), Costate(float(p1), float(p2)))

    def as_array(self) -> np.ndarray:
        s, c = self.state, self.costate
        return np.array([s.q1, s.q2, c.p1, c.p2])


@dataclass(frozen=True, slots=True)
class Control:
    u1: float
    u2: float

    def __post_init__(self):
        _require_finite(self, ("u1", "u2"))

    @property
    def norm2(self) -> float:
        return self.u1 * self.u1 + self.u2 * self.u2

    @property
    def norm(self) -> float:
        return math.hypot(self.u1, self.u2)


def frame_inner(p: Sequence[float], v: Sequence[float]) -> float:
    """Pairing of a covector with a vector, ``p1*v1 + p2*v2``."""
    return float(p[0] * v[0] + p[1] * v[1])


def fd_step(q: Sequence[float]) -> float:
    """Central-difference step balancing truncation against rounding."""
    return np.finfo(float).eps ** (1.0 / 3.0) * max(1.0, abs(q[0]), abs(q[1]))


def fd_jacobian(field: VectorField, q: Sequence[float], h: float | None = None) -> np.ndarray:
    """Central finite-difference Jacobian of a planar vector field at ``q``."""
    q = np.asarray(q, dtype=float)
    if h is None:
        h = fd_step(q)
    jac = np.empty((2, 2))
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        jac[:, j] = (np.asarray(field(q + e)) - np.asarray(field(q - e))) / (2.0 * h)
    return jac


@dataclass(frozen=True)
class FrameField:
    name: str
    f1: VectorField
    f2: VectorField
    jac1: JacobianField
    jac2: JacobianField
    domain_guard: Guard

    @classmethod
    def from_fields(cls, name: str, f1: VectorField, f2: VectorField,
                    domain_guard: Guard | None = None,
                    jac1: JacobianField | None = None,
                    jac2: JacobianField | None = None) -> "FrameField":
        """Build a frame, falling back to finite-difference Jacobians."""
        if jac1 is None:
            jac1 = lambda q: fd_jacobian(f1, q)  # noqa: E731
        if jac2 is None:
            jac2 = lambda q: fd_jacobian(f2, q)  # noqa: E731
        if domain_guard is None:
            domain_guard = lambda q: True  # noqa: E731
        return cls(name, f1, f2, jac1, jac2, domain_guard)

    def gram_det(self, q: Sequence[float]) -> float:
        a = self.f1(q)
        b = self.f2(q)
        aa = a[0] * a[0] + a[1] * a[1]
        bb = b[0] * b[0] + b[1] * b[1]
        ab = a[0] * b[0] + a[1] * b[1]
        return float(aa * bb - ab * ab)

    def is_admissible(self, q: Sequence[float]) -> bool:
        if not (math.isfinite(q[0]) and math.isfinite(q[1])):
            return False
        if not self.domain_guard(q):
            return False
        return self.gram_det(q) > EPS_DEG ** 2

    def check(self, q: Sequence[float]) -> None:
        """Raise :class:`DegenerateFrameError` unless the frame is usable at ``q``."""
        if not (math.isfinite(q[0]) and math.isfinite(q[1])):
            raise DegenerateFrameError(f"frame {self.name!r}: non-finite point {tuple(q)}")
        g = self.gram_det(q)
        if not self.domain_guard(q) or not g > EPS_DEG ** 2:
            raise DegenerateFrameError(
                f"frame {self.name!r} is degenerate at q=({q[0]:.17g}, {q[1]:.17g}) "
                f"(gram_det={g:.3e})", gram_det=g)


# --- built-in frames -------------------------------------------------------

_IDENTITY = np.eye(2)
_ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]])


def paper_frame() -> FrameField:
    """Radial/angular frame ``f1 = (q1, q2)``, ``f2 = (q2, -q1)``."""
    return FrameField(
        name="paper",
        f1=lambda q: np.array([q[0], q[1]], dtype=float),
        f2=lambda q: np.array([q[1], -q[0]], dtype=float),
        jac1=lambda q: _IDENTITY.copy(),
        jac2=lambda q: _ROTATION.copy(),
        domain_guard=lambda q: q[0] * q[0] + q[1] * q[1] > EPS_DEG,
    )


def _halfplane_frame() -> FrameField:
    # orthonormal frame of the hyperbolic upper half-plane
    return FrameField(
        name="halfplane",
        f1=lambda q: np.array([q[1], 0.0]),
        f2=lambda q: np.array([0.0, q[1]]),
        jac1=lambda q: np.array([[0.0, 1.0], [0.0, 0.0]]),
        jac2=lambda q: np.array([[0.0, 0.0], [0.0, 1.0]]),
        domain_guard=lambda q: q[1] > EPS_DEG,
    )


def _grushin_frame() -> FrameField:
    return FrameField(
        name="grushin",
        f1=lambda q: np.array([1.0, 0.0]),
        f2=lambda q: np.array([0.0, q[0]]),
        jac1=lambda q: np.zeros((2, 2)),
        jac2=lambda q: np.array([[0.0, 0.0], [1.0, 0.0]]),
        domain_guard=lambda q: abs(q[0]) > EPS_DEG,
    )


_BUILTIN = {
    "paper": paper_frame,
    "halfplane": _halfplane_frame,
    "grushin": _grushin_frame,
}

FRAME_NAMES = tuple(_BUILTIN)


def builtin_frame(name: str) -> FrameField:
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise UnknownFrameError(f"unknown frame {name!r}; valid names: {', '.join(FRAME_NAMES)}") from None
