"""End-to-end analysis: snapshot -> joint moments -> activations -> report."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .dynamics import GeneralizedForces, inverse_dynamics
from .kinematics import Posture
from .model import Model, load_model
from .optimizer import ActivationSolution, SolverParams, solve_static_optimization
from .report import SymmetryReport, build_report
from .scenarios import (
    ScenarioConfig,
    ScenarioSnapshot,
    build_snapshot,
    posture_table_hash,
    prepare_case_model,
)


@dataclass
class AnalysisResult:
    config: ScenarioConfig
    model: Model
    snapshot: ScenarioSnapshot
    forces: GeneralizedForces
    solution: ActivationSolution
    report: SymmetryReport


def default_model() -> Model:
    text = resources.files("trunkload.data").joinpath("default_model.yaml").read_text(
        encoding="utf-8"
    )
    return load_model(text)


def analyze_case(
    model: Model,
    config: ScenarioConfig,
    params: SolverParams = SolverParams(),
    posture_table: Mapping[str, float] | None = None,
) -> AnalysisResult:
    """Run the full pipeline for one case snapshot on a crutchless base model."""
    case_model = prepare_case_model(model, config)
    snapshot = build_snapshot(config, case_model, posture_table=posture_table)
    forces = inverse_dynamics(case_model, snapshot.posture, list(snapshot.loads))
    solution = solve_static_optimization(case_model, snapshot.posture, forces, params)
    assumptions = {
        "body_weight_n": config.body_weight,
        "injured_side": config.injured_side,
        "injured_foot_fraction": config.injured_foot_fraction,
        "crutch_share": config.crutch_share,
        "objective_exponent": params.exponent,
        "posture_hash": posture_table_hash(
            dict(posture_table)
            if posture_table is not None
            else _posture_as_table(case_model, snapshot.posture)
        ),
    }
    report = build_report(
        solution,
        case_model,
        case=config.case,
        phase=config.resolved_phase,
        assumptions=assumptions,
    )
    return AnalysisResult(
        config=config,
        model=case_model,
        snapshot=snapshot,
        forces=forces,
        solution=solution,
        report=report,
    )


def _posture_as_table(model: Model, posture: Posture) -> dict[str, float]:
    return {name: float(posture.q[i]) for i, name in enumerate(model.coordinates)}


def run_cases(
    model: Model,
    configs,
    params: SolverParams = SolverParams(),
) -> list[AnalysisResult]:
    return [analyze_case(model, cfg, params) for cfg in configs]
