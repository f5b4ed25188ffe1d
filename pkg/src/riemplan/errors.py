"""Exception types shared across the package."""

from __future__ import annotations


class DegenerateFrameError(ValueError):
    """Raised where a frame is undefined or its fields are (nearly) dependent."""

    def __init__(self, message: str, gram_det: float | None = None):
        super().__init__(message)
        self.gram_det = gram_det


class GuardViolationError(DegenerateFrameError):
    """The flow left the frame's domain (or blew up) during integration."""

    def __init__(self, message: str, time: float, gram_det: float | None = None):
        super().__init__(message, gram_det)
        self.time = time


class UnknownFrameError(ValueError):
    pass


class MaxStepsExceededError(RuntimeError):
    pass


class DomainError(ValueError):
    """A closed-form quantity was requested outside the range where it exists."""


class SingularityError(DomainError):
    pass


class DegenerateParametersError(DomainError):
    pass
