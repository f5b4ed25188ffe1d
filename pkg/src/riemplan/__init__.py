"""Pontryagin extremals, frame curvature and shooting on a planar Riemannian frame."""

from .closed_form import (ClosedFormParams, controls_at, kappa_g_at, phase_at, theta_at,
                          theta_dot_at)
from .curvature import (StructureData, gaussian_curvature, geodesic_curvature, lie_bracket,
                        structure_functions)
from .errors import (DegenerateFrameError, DegenerateParametersError, DomainError,
                     GuardViolationError, MaxStepsExceededError, SingularityError,
                     UnknownFrameError)
from .flow import (ConservationReport, IntegratorConfig, Method, RhsKind, Trajectory,
                   conservation_report, general_rhs, hamilton_rhs, hamiltonian, integrate,
                   optimal_controls, reduced_rhs)
from .frames import (Control, Costate, FrameField, PhasePoint, State, builtin_frame, frame_inner,
                     paper_frame)
from .planner import PlanResult, ShootingConfig, plan, residual, shoot

__version__ = "0.1.0"

__all__ = ["ClosedFormParams", "controls_at", "kappa_g_at", "phase_at", "theta_at", "theta_dot_at",
           "StructureData", "gaussian_curvature", "geodesic_curvature", "lie_bracket",
           "structure_functions", "DegenerateFrameError", "DegenerateParametersError",
           "DomainError", "GuardViolationError", "MaxStepsExceededError", "SingularityError",
           "UnknownFrameError", "ConservationReport", "IntegratorConfig", "Method", "RhsKind",
           "Trajectory", "conservation_report", "general_rhs", "hamilton_rhs", "hamiltonian",
           "integrate", "optimal_controls", "reduced_rhs", "Control", "Costate", "FrameField",
           "PhasePoint", "State", "builtin_frame", "frame_inner", "paper_frame", "PlanResult",
           "ShootingConfig", "plan", "residual", "shoot"]
