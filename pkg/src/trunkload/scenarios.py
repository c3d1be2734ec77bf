"""Walking cases as quasi-static snapshots: posture plus support loads.

Three cases are shipped: normal walking, single-crutch (three-point
gait, crutch opposite the injured foot), and double-crutch (four-point
gait).  The injured foot bears a configurable fraction of body weight
(default 10%); in shared-support phases the crutch share of the
remaining weight is the explicit ``crutch_share`` knob.  Support
reactions are vertical point loads at foot/crutch-tip markers; their
vertical components always sum to body weight.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping

import numpy as np
import yaml

from .dynamics import ExternalLoad
from .errors import (
    ConfigError,
    ModelMismatchError,
    ParseError,
    UnknownPhaseError,
)
from .kinematics import Posture
from .model import Model, attach_crutches, crutch_tip_point, mirror_name, mirror_point

CASES = ("normal", "single_crutch", "double_crutch")

PHASES = {
    "normal": ("heel_strike", "mid_stance", "toe_off"),
    "single_crutch": ("advance", "shared_support", "swing"),
    "double_crutch": ("crutch_advance", "injured_step", "healthy_step"),
}

DEFAULT_PHASE = {
    "normal": "mid_stance",
    "single_crutch": "shared_support",
    "double_crutch": "healthy_step",
}

CRUTCH_COUNT = {"normal": 0, "single_crutch": 1, "double_crutch": 2}

FOOT_CONTACT_POINT = (0.0, -0.08, 0.0)  # foot frame; on the ground under the ankle


@dataclass(frozen=True)
class ScenarioConfig:
    case: str
    injured_side: str = "right"
    injured_foot_fraction: float = 0.10
    crutch_share: float = 0.30
    body_weight: float = 700.0
    phase: str | None = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ConfigError(f"unknown case {self.case!r}; expected one of {CASES}")
        if self.injured_side not in ("left", "right"):
            raise ConfigError(f"injured_side must be 'left' or 'right', got {self.injured_side!r}")
        if not 0.0 <= self.injured_foot_fraction <= 1.0:
            raise ConfigError(
                f"injured_foot_fraction must lie in [0, 1], got {self.injured_foot_fraction}"
            )
        if not 0.0 <= self.crutch_share <= 1.0:
            raise ConfigError(f"crutch_share must lie in [0, 1], got {self.crutch_share}")
        if not self.body_weight > 0:
            raise ConfigError(f"body_weight must be positive, got {self.body_weight}")
        if self.phase is not None and self.phase not in PHASES[self.case]:
            raise UnknownPhaseError(
                f"phase {self.phase!r} not in {PHASES[self.case]} for case {self.case!r}"
            )

    @property
    def resolved_phase(self) -> str:
        return self.phase or DEFAULT_PHASE[self.case]

    @property
    def healthy_side(self) -> str:
        return "left" if self.injured_side == "right" else "right"

    @property
    def crutch_sides(self) -> tuple[str, ...]:
        if self.case == "single_crutch":
            return (self.healthy_side,)
        if self.case == "double_crutch":
            return ("left", "right")
        return ()


@dataclass(frozen=True)
class ScenarioSnapshot:
    config: ScenarioConfig
    posture: Posture
    loads: tuple[ExternalLoad, ...]
    description: str = ""


def _foot(side: str) -> str:
    return f"foot_{side[0]}"


def _crutch(side: str) -> str:
    return f"crutch_{side[0]}"


def _support(segment: str, point, magnitude: float) -> ExternalLoad:
    return ExternalLoad(segment=segment, point=tuple(point), force=(0.0, float(magnitude), 0.0))


def distribute_loads(config: ScenarioConfig) -> list[ExternalLoad]:
    """Vertical support reactions for the configured case and phase.

    The injured foot bears exactly ``f * W`` whenever it is in contact;
    the healthy-side reaction is computed as the exact remainder so the
    vertical components always sum to ``W``.
    """
    w = config.body_weight
    f = config.injured_foot_fraction
    kappa = config.crutch_share
    injured = _foot(config.injured_side)
    healthy = _foot(config.healthy_side)
    tip = crutch_tip_point()
    phase = config.resolved_phase

    if config.case == "normal":
        left = _foot("left")
        right = _foot("right")
        if phase == "mid_stance":
            return [_support(left, FOOT_CONTACT_POINT, w)]
        if phase == "heel_strike":
            lead = 0.55 * w
            return [
                _support(left, FOOT_CONTACT_POINT, lead),
                _support(right, FOOT_CONTACT_POINT, w - lead),
            ]
        # toe_off
        trail = 0.45 * w
        return [
            _support(left, FOOT_CONTACT_POINT, trail),
            _support(right, FOOT_CONTACT_POINT, w - trail),
        ]

    if config.case == "single_crutch":
        crutch = _crutch(config.healthy_side)
        if phase == "advance":
            # crutch and injured foot in the air, healthy foot alone
            return [_support(healthy, FOOT_CONTACT_POINT, w)]
        if phase == "shared_support":
            injured_load = f * w
            crutch_load = kappa * (w - injured_load)
            healthy_load = w - injured_load - crutch_load
            return [
                _support(injured, FOOT_CONTACT_POINT, injured_load),
                _support(healthy, FOOT_CONTACT_POINT, healthy_load),
                _support(crutch, tip, crutch_load),
            ]
        # swing: healthy foot in the air, crutch takes the remainder
        injured_load = f * w
        return [
            _support(injured, FOOT_CONTACT_POINT, injured_load),
            _support(crutch, tip, w - injured_load),
        ]

    # double_crutch
    if phase == "crutch_advance":
        injured_load = f * w
        return [
            _support(injured, FOOT_CONTACT_POINT, injured_load),
            _support(healthy, FOOT_CONTACT_POINT, w - injured_load),
        ]
    if phase == "injured_step":
        crutch_total = kappa * w
        return [
            _support(healthy, FOOT_CONTACT_POINT, w - crutch_total),
            _support(_crutch("left"), tip, crutch_total / 2.0),
            _support(_crutch("right"), tip, crutch_total - crutch_total / 2.0),
        ]
    # healthy_step: injured foot plus both crutches, healthy foot lifted
    injured_load = f * w
    each = (w - injured_load) / 2.0
    return [
        _support(injured, FOOT_CONTACT_POINT, injured_load),
        _support(_crutch("left"), tip, each),
        _support(_crutch("right"), tip, w - injured_load - each),
    ]


# ---------------------------------------------------------------------------
# mirroring


def _mirror_sign(joint, k: int) -> float:
    """How coordinate ``k`` of a joint transforms under the x -> -x flip.

    Rotations about the lateral (x) axis are preserved, rotations about
    axes in the sagittal plane negate; translations do the opposite.
    Joints must be authored with principal axes for this to be defined.
    """
    ax = np.asarray(joint.axes[k], dtype=float)
    along_x = abs(abs(ax[0]) - 1.0) < 1e-12
    perp_x = abs(ax[0]) < 1e-12
    if not (along_x or perp_x):
        raise ConfigError(
            f"joint {joint.name!r} axis {k + 1} is oblique to the sagittal plane; cannot mirror"
        )
    if joint.kind == "prismatic":
        return -1.0 if along_x else 1.0
    return 1.0 if along_x else -1.0


def _coordinate_owners(model: Model) -> dict[str, tuple]:
    owners = {}
    for joint in model.joints:
        names = joint.coord_names or joint.default_coord_names()
        for k, name in enumerate(names):
            owners[name] = (joint, k)
    return owners


def coordinate_mirror(model: Model) -> list[tuple[int, float]]:
    """Per-coordinate (target index, sign) mapping for a left-right flip.

    Requires every sided joint to have its counterpart in the same
    model (true for the crutchless and double-crutch models).
    """
    coords = model.coordinates
    owners = _coordinate_owners(model)
    mapping: list[tuple[int, float]] = [(-1, 1.0)] * len(coords)
    for src, name in enumerate(coords):
        other = mirror_name(name)
        try:
            dst = model.coordinate_index(other)
        except KeyError:
            raise ConfigError(
                f"coordinate {name!r} has no mirror counterpart {other!r} in this model"
            )
        joint, k = owners[name]
        mapping[src] = (dst, _mirror_sign(joint, k))
    return mapping


def mirror_posture(model: Model, posture: Posture) -> Posture:
    mapping = coordinate_mirror(model)
    q = np.zeros_like(posture.q)
    qd = np.zeros_like(posture.qdot)
    qdd = np.zeros_like(posture.qddot)
    for src, (dst, sign) in enumerate(mapping):
        q[dst] = sign * posture.q[src]
        qd[dst] = sign * posture.qdot[src]
        qdd[dst] = sign * posture.qddot[src]
    return Posture(q, qd, qdd)


def mirror_loads(model: Model, loads) -> list[ExternalLoad]:
    out = []
    for ld in loads:
        seg = mirror_name(ld.segment)
        if not model.has_segment(seg):
            raise ConfigError(f"segment {ld.segment!r} has no mirror counterpart {seg!r}")
        fx, fy, fz = ld.force
        tx, ty, tz = ld.torque
        out.append(
            ExternalLoad(
                segment=seg,
                point=mirror_point(ld.point),
                force=(-fx, fy, fz),
                torque=(tx, -ty, -tz),
            )
        )
    return out


# ---------------------------------------------------------------------------
# scenario documents and the shipped posture library

_SCENARIO_FIELDS = {
    "case", "injured_side", "injured_foot_fraction", "crutch_share",
    "body_weight", "phase", "posture", "postures",
}


def load_scenario(doc: str, lenient: bool = False) -> tuple[ScenarioConfig, dict[str, dict[str, float]]]:
    """Parse a scenario document into a config and per-phase posture tables."""
    try:
        data = yaml.safe_load(io.StringIO(doc))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ParseError(f"malformed scenario{loc}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ParseError("scenario top level must be a mapping")
    unknown = set(data) - _SCENARIO_FIELDS
    if unknown and not lenient:
        raise ParseError(f"scenario: unknown field(s) {sorted(unknown)}")
    if "case" not in data:
        raise ParseError("scenario: missing required field 'case'")

    try:
        config = ScenarioConfig(
            case=str(data["case"]),
            injured_side=str(data.get("injured_side", "right")),
            injured_foot_fraction=float(data.get("injured_foot_fraction", 0.10)),
            crutch_share=float(data.get("crutch_share", 0.30)),
            body_weight=float(data.get("body_weight", 700.0)),
            phase=None if data.get("phase") is None else str(data["phase"]),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"scenario: {exc}") from exc

    postures: dict[str, dict[str, float]] = {}
    if "postures" in data and data["postures"] is not None:
        for phase, table in data["postures"].items():
            if str(phase) not in PHASES[config.case] and not lenient:
                raise ParseError(f"scenario: posture for unknown phase {phase!r}")
            postures[str(phase)] = {str(k): float(v) for k, v in (table or {}).items()}
    if "posture" in data and data["posture"] is not None:
        postures[config.resolved_phase] = {
            str(k): float(v) for k, v in data["posture"].items()
        }
    return config, postures


def load_scenario_file(path: str, lenient: bool = False):
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read(), lenient=lenient)


def _default_scenario_text(case: str) -> str:
    ref = resources.files("trunkload.data").joinpath(f"scenarios/{case}.yaml")
    return ref.read_text(encoding="utf-8")


def default_scenario(case: str) -> tuple[ScenarioConfig, dict[str, dict[str, float]]]:
    if case not in CASES:
        raise ConfigError(f"unknown case {case!r}; expected one of {CASES}")
    return load_scenario(_default_scenario_text(case))


def default_posture_table(case: str, phase: str) -> dict[str, float]:
    _, postures = default_scenario(case)
    if phase not in PHASES[case]:
        raise UnknownPhaseError(f"phase {phase!r} not in {PHASES[case]} for case {case!r}")
    return postures.get(phase, {})


def posture_table_hash(table: Mapping[str, float]) -> str:
    """Stable digest of a posture table, echoed in reports."""
    blob = ";".join(f"{k}={table[k]:.17g}" for k in sorted(table))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# snapshot assembly


def prepare_case_model(model: Model, config: ScenarioConfig) -> Model:
    """Attach the crutches the case calls for (pure; base model unchanged)."""
    count = CRUTCH_COUNT[config.case]
    if count == 0:
        return model
    for side in config.crutch_sides:
        if not model.has_segment(f"arm_{side[0]}") and not model.has_segment(_crutch(side)):
            raise ModelMismatchError(
                f"case {config.case!r} needs a {side} hand attachment "
                f"(segment arm_{side[0]!r}) or an already attached crutch"
            )
    if all(model.has_segment(_crutch(side)) for side in config.crutch_sides):
        return model
    return attach_crutches(model, count, injured_side=config.injured_side)


def build_snapshot(
    config: ScenarioConfig,
    model: Model,
    posture_table: Mapping[str, float] | None = None,
) -> ScenarioSnapshot:
    """Posture + loads for one (case, phase) on a crutch-prepared model.

    Shipped posture tables are authored for a right-side injury; for
    ``injured_side='left'`` the mirrored posture and loads are used.
    """
    phase = config.resolved_phase
    if phase not in PHASES[config.case]:
        raise UnknownPhaseError(f"phase {phase!r} not in {PHASES[config.case]}")

    for side in config.crutch_sides:
        if not model.has_segment(_crutch(side)):
            raise ModelMismatchError(
                f"case {config.case!r} needs segment {_crutch(side)!r}; "
                "attach crutches to the model first"
            )

    # Shipped tables are authored for a right-side injury; a left-side
    # injury uses the numerically mirrored posture and loads.
    mirrored = config.case != "normal" and config.injured_side == "left"
    if posture_table is None:
        if mirrored:
            authored = default_posture_table(config.case, phase)
            posture = _mirror_table_posture(model, authored)
        else:
            posture = Posture.from_values(model, default_posture_table(config.case, phase))
    else:
        posture = Posture.from_values(model, dict(posture_table))

    if mirrored and posture_table is None:
        loads = mirror_loads(model, distribute_loads(replace(config, injured_side="right")))
    else:
        loads = distribute_loads(config)
    _check_vertical_sum(loads, config.body_weight)
    return ScenarioSnapshot(
        config=config,
        posture=posture,
        loads=tuple(loads),
        description=_describe(config, phase),
    )


def _mirror_table_posture(model: Model, authored_table: Mapping[str, float]) -> Posture:
    """Posture for a left-side injury: flip the authored right-injured table.

    Works by name onto the target model, so the authored table may refer
    to coordinates (e.g. a left-hand crutch) that only the mirrored
    model's counterpart joint carries.
    """
    owners = _coordinate_owners(model)
    q = np.zeros(model.ncoords)
    for name, value in authored_table.items():
        target = mirror_name(name)
        try:
            idx = model.coordinate_index(target)
        except KeyError:
            raise ConfigError(
                f"mirrored coordinate {target!r} (from {name!r}) not in the model"
            ) from None
        joint, k = owners[target]
        q[idx] = _mirror_sign(joint, k) * float(value)
    return Posture(q, np.zeros_like(q), np.zeros_like(q))


def _check_vertical_sum(loads, body_weight: float) -> None:
    total = 0.0
    for ld in loads:
        total += ld.force[1]
    if abs(total - body_weight) > 1e-9 * max(1.0, body_weight):
        raise ConfigError(
            f"support loads sum to {total!r}, expected body weight {body_weight!r}"
        )


def _describe(config: ScenarioConfig, phase: str) -> str:
    if config.case == "normal":
        return f"normal walking, {phase.replace('_', ' ')}"
    crutches = "single crutch" if config.case == "single_crutch" else "double crutches"
    return (
        f"{crutches}, {phase.replace('_', ' ')}; injured {config.injured_side} foot "
        f"bears {config.injured_foot_fraction:.0%} of body weight"
    )
