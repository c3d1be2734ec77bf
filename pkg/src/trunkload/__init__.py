"""Trunk-muscle load analysis for normal and crutch-assisted walking."""

__version__ = "0.1.0"

from .backends import active_backend
from .dynamics import ExternalLoad, GeneralizedForces, inverse_dynamics
from .kinematics import (
    Posture,
    forward_kinematics,
    moment_arm,
    moment_arm_matrix,
    muscle_length,
    muscle_lengths,
)
from .model import (
    BodySegment,
    JointDef,
    Model,
    MuscleElement,
    MuscleGroup,
    attach_crutches,
    detach_crutches,
    load_model,
    load_model_file,
    validate_model,
)
from .optimizer import (
    ActivationSolution,
    SolverParams,
    brute_force_oracle,
    solve_activation_qp,
    solve_static_optimization,
)
from .pipeline import analyze_case, default_model
from .report import (
    SymmetryReport,
    asymmetry_index,
    build_report,
    compare_cases,
    group_activation,
    risk_flags,
)
from .scenarios import (
    ScenarioConfig,
    ScenarioSnapshot,
    build_snapshot,
    distribute_loads,
    load_scenario,
    mirror_loads,
    mirror_posture,
)

__all__ = [
    "ActivationSolution",
    "BodySegment",
    "ExternalLoad",
    "GeneralizedForces",
    "JointDef",
    "Model",
    "MuscleElement",
    "MuscleGroup",
    "Posture",
    "ScenarioConfig",
    "ScenarioSnapshot",
    "SolverParams",
    "SymmetryReport",
    "active_backend",
    "analyze_case",
    "asymmetry_index",
    "attach_crutches",
    "brute_force_oracle",
    "build_report",
    "build_snapshot",
    "compare_cases",
    "default_model",
    "detach_crutches",
    "distribute_loads",
    "forward_kinematics",
    "group_activation",
    "inverse_dynamics",
    "load_model",
    "load_model_file",
    "load_scenario",
    "mirror_loads",
    "mirror_posture",
    "moment_arm",
    "moment_arm_matrix",
    "muscle_length",
    "muscle_lengths",
    "risk_flags",
    "solve_activation_qp",
    "solve_static_optimization",
    "validate_model",
]
