"""Rigid-body model: segments, joints, muscle paths, and the document loader.

A model is a kinematic tree rooted at a distinguished ``ground`` segment.
Every non-ground segment hangs from exactly one joint; joints contribute
zero to three generalized coordinates depending on their kind.  Muscle
elements are frictionless polylines through attachment points on the
segments, bounded by a maximum isometric force.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np
import yaml

from .errors import ConfigError, ParseError, ValidationError

GROUND = "ground"

JOINT_KINDS = ("revolute", "prismatic", "fixed", "universal", "ball")

# Number of generalized coordinates contributed by each joint kind.
KIND_NCOORDS = {"revolute": 1, "prismatic": 1, "fixed": 0, "universal": 2, "ball": 3}

# Element counts of the eight analyzed trunk groups in the reference
# full-scale model.  These are metadata carried by the reduced model, not
# a required element cardinality.
TRUNK_GROUP_ELEMENT_COUNTS = {
    "rectus_abdominis": 2,
    "iliacus": 22,
    "external_oblique": 12,
    "internal_oblique": 12,
    "quadratus_lumborum": 36,
    "iliocostalis": 24,
    "latissimus_dorsi": 28,
    "longissimus": 10,
}

TRUNK_GROUPS = tuple(TRUNK_GROUP_ELEMENT_COUNTS)

Vec3 = tuple[float, float, float]
Mat3 = tuple[Vec3, Vec3, Vec3]

_UNIT_TOL = 1e-9


def _vec3(value) -> Vec3:
    v = tuple(float(x) for x in value)
    if len(v) != 3:
        raise ValueError(f"expected 3 components, got {len(v)}")
    return v  # type: ignore[return-value]


def _mat3(value) -> Mat3:
    rows = tuple(_vec3(row) for row in value)
    if len(rows) != 3:
        raise ValueError(f"expected 3 rows, got {len(rows)}")
    return rows  # type: ignore[return-value]


@dataclass(frozen=True)
class BodySegment:
    """One rigid segment: mass, center of mass, and inertia about the COM."""

    name: str
    mass: float = 0.0
    com: Vec3 = (0.0, 0.0, 0.0)
    inertia: Mat3 = ((0.0,) * 3,) * 3


@dataclass(frozen=True)
class JointDef:
    """Connection from a parent segment to a child segment.

    ``axis`` (and ``axis2``/``axis3`` for multi-coordinate kinds) are unit
    vectors in the parent frame; rotations compose intrinsically in axis
    order.  ``anchor_parent``/``anchor_child`` locate the shared joint
    point in the two local frames.
    """

    name: str
    parent: str
    child: str
    kind: str = "revolute"
    axis: Vec3 = (0.0, 0.0, 1.0)
    axis2: Vec3 = (0.0, 0.0, 0.0)
    axis3: Vec3 = (0.0, 0.0, 0.0)
    anchor_parent: Vec3 = (0.0, 0.0, 0.0)
    anchor_child: Vec3 = (0.0, 0.0, 0.0)
    limits: tuple[tuple[float, float] | None, ...] = ()
    coord_names: tuple[str, ...] = ()

    @property
    def ncoords(self) -> int:
        return KIND_NCOORDS.get(self.kind, 0)

    @property
    def axes(self) -> tuple[Vec3, ...]:
        return (self.axis, self.axis2, self.axis3)[: self.ncoords]

    def default_coord_names(self) -> tuple[str, ...]:
        n = self.ncoords
        if n == 0:
            return ()
        if n == 1:
            return (self.name,)
        return tuple(f"{self.name}_{k + 1}" for k in range(n))


@dataclass(frozen=True)
class MuscleElement:
    """Polyline actuator with a maximum isometric force bound."""

    name: str
    group: str
    side: str  # left | right | midline
    path: tuple[tuple[str, Vec3], ...]
    f_max: float


@dataclass(frozen=True)
class MuscleGroup:
    id: str
    anatomical_name: str
    paper_element_count: int = 0


class ModelArrays(NamedTuple):
    """Flat numeric view of a model, shared by both compute backends.

    Bodies are indexed in tree pre-order with ground at index 0; the
    joint attaching body ``b`` lives at row ``b`` of the joint arrays.
    """

    parent: np.ndarray      # (nb,) int64, parent[0] == -1
    jkind: np.ndarray       # (nb,) int64: 0 rev, 1 prism, 2 fixed, 3 universal, 4 ball, -1 ground
    jaxes: np.ndarray       # (nb, 3, 3) float64, axis rows (unused rows zero)
    anchor_p: np.ndarray    # (nb, 3) float64
    anchor_c: np.ndarray    # (nb, 3) float64
    jcoord: np.ndarray      # (nb,) int64 first coordinate index, -1 if none
    jncoords: np.ndarray    # (nb,) int64
    mass: np.ndarray        # (nb,) float64
    com: np.ndarray         # (nb, 3) float64
    inertia: np.ndarray     # (nb, 3, 3) float64
    mp_seg: np.ndarray      # (total path points,) int64 body index per point
    mp_loc: np.ndarray      # (total path points, 3) float64
    m_off: np.ndarray       # (nm + 1,) int64 path-point ranges per muscle
    f_max: np.ndarray       # (nm,) float64
    body_names: tuple[str, ...]
    ncoords: int


_KIND_CODE = {"revolute": 0, "prismatic": 1, "fixed": 2, "universal": 3, "ball": 4}


@dataclass(frozen=True, eq=True)
class Model:
    """Immutable model value; all analysis functions are pure in it."""

    segments: tuple[BodySegment, ...]
    joints: tuple[JointDef, ...]
    muscles: tuple[MuscleElement, ...]
    groups: tuple[MuscleGroup, ...]
    gravity: Vec3 = (0.0, -9.81, 0.0)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    # -- lookups ---------------------------------------------------------

    def segment(self, name: str) -> BodySegment:
        for s in self.segments:
            if s.name == name:
                return s
        raise KeyError(name)

    def has_segment(self, name: str) -> bool:
        return any(s.name == name for s in self.segments)

    def muscle(self, name: str) -> MuscleElement:
        for m in self.muscles:
            if m.name == name:
                return m
        raise KeyError(name)

    def group(self, group_id: str) -> MuscleGroup:
        for g in self.groups:
            if g.id == group_id:
                return g
        raise KeyError(group_id)

    def joint(self, name: str) -> JointDef:
        for j in self.joints:
            if j.name == name:
                return j
        raise KeyError(name)

    # -- derived structure ----------------------------------------------

    @property
    def body_order(self) -> tuple[str, ...]:
        """Segment names in tree pre-order, ground first."""
        return self._structure()[0]

    @property
    def coordinates(self) -> tuple[str, ...]:
        """Generalized coordinate names, frozen in tree pre-order."""
        return self._structure()[1]

    @property
    def ncoords(self) -> int:
        return len(self.coordinates)

    def coordinate_index(self, name: str) -> int:
        try:
            return self._structure()[2][name]
        except KeyError:
            raise KeyError(name) from None

    def _structure(self):
        cached = self._cache.get("structure")
        if cached is None:
            cached = _derive_structure(self)
            self._cache["structure"] = cached
        return cached

    def arrays(self) -> ModelArrays:
        arrays = self._cache.get("arrays")
        if arrays is None:
            arrays = _build_arrays(self)
            self._cache["arrays"] = arrays
        return arrays


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.entity}: {self.rule}: {self.message}"


# ---------------------------------------------------------------------------
# structure derivation


def _derive_structure(model: Model):
    """Pre-order body list and coordinate table; raises on a broken tree."""
    problems = _tree_violations(model)
    if problems:
        raise ValidationError("; ".join(str(v) for v in problems))

    children: dict[str, list[JointDef]] = {s.name: [] for s in model.segments}
    for j in model.joints:
        children[j.parent].append(j)

    body_order: list[str] = []
    coords: list[str] = []
    joint_of: dict[str, JointDef] = {}

    def visit(seg: str):
        body_order.append(seg)
        for j in children[seg]:
            joint_of[j.child] = j
            names = j.coord_names or j.default_coord_names()
            coords.extend(names)
            visit(j.child)

    visit(GROUND)
    index = {name: i for i, name in enumerate(coords)}
    if len(index) != len(coords):
        raise ValidationError("duplicate coordinate names")
    return tuple(body_order), tuple(coords), index, joint_of


def _tree_violations(model: Model) -> list[Violation]:
    out: list[Violation] = []
    names = [s.name for s in model.segments]
    seen = set()
    for n in names:
        if n in seen:
            out.append(Violation(n, "unique segment names", "duplicate segment"))
        seen.add(n)
    if GROUND not in seen:
        out.append(Violation(GROUND, "rooted tree", "no ground segment"))
        return out

    by_child: dict[str, JointDef] = {}
    for j in model.joints:
        if j.parent not in seen:
            out.append(Violation(j.name, "joint endpoints exist", f"unknown parent {j.parent!r}"))
        if j.child not in seen:
            out.append(Violation(j.name, "joint endpoints exist", f"unknown child {j.child!r}"))
        if j.child == GROUND:
            out.append(Violation(j.name, "rooted tree", "ground cannot be a child"))
        if j.child in by_child:
            out.append(Violation(j.name, "tree", f"segment {j.child!r} has two parent joints"))
        by_child[j.child] = j
    if out:
        return out

    # reachability from ground detects cycles and orphan islands
    reached = {GROUND}
    frontier = [GROUND]
    children: dict[str, list[str]] = {s.name: [] for s in model.segments}
    for j in model.joints:
        children[j.parent].append(j.child)
    while frontier:
        seg = frontier.pop()
        for ch in children[seg]:
            if ch in reached:
                out.append(Violation(ch, "acyclicity", "cycle or repeated segment"))
                return out
            reached.add(ch)
            frontier.append(ch)
    for s in model.segments:
        if s.name not in reached:
            out.append(
                Violation(s.name, "acyclicity", "segment unreachable from ground (cycle or orphan)")
            )
    return out


def _build_arrays(model: Model) -> ModelArrays:
    body_order, coords, coord_index, joint_of = model._structure()
    nb = len(body_order)
    body_index = {n: i for i, n in enumerate(body_order)}
    seg_by_name = {s.name: s for s in model.segments}

    parent = np.full(nb, -1, dtype=np.int64)
    jkind = np.full(nb, -1, dtype=np.int64)
    jaxes = np.zeros((nb, 3, 3))
    anchor_p = np.zeros((nb, 3))
    anchor_c = np.zeros((nb, 3))
    jcoord = np.full(nb, -1, dtype=np.int64)
    jncoords = np.zeros(nb, dtype=np.int64)
    mass = np.zeros(nb)
    com = np.zeros((nb, 3))
    inertia = np.zeros((nb, 3, 3))

    for b, name in enumerate(body_order):
        seg = seg_by_name[name]
        mass[b] = seg.mass
        com[b] = seg.com
        inertia[b] = seg.inertia
        if name == GROUND:
            continue
        j = joint_of[name]
        parent[b] = body_index[j.parent]
        jkind[b] = _KIND_CODE[j.kind]
        anchor_p[b] = j.anchor_parent
        anchor_c[b] = j.anchor_child
        for k, ax in enumerate(j.axes):
            jaxes[b, k] = ax
        jncoords[b] = j.ncoords
        if j.ncoords:
            names = j.coord_names or j.default_coord_names()
            jcoord[b] = coord_index[names[0]]

    mp_seg: list[int] = []
    mp_loc: list[Vec3] = []
    m_off = [0]
    f_max = np.zeros(len(model.muscles))
    for i, m in enumerate(model.muscles):
        for seg_name, pt in m.path:
            mp_seg.append(body_index[seg_name])
            mp_loc.append(pt)
        m_off.append(len(mp_seg))
        f_max[i] = m.f_max

    return ModelArrays(
        parent=parent,
        jkind=jkind,
        jaxes=jaxes,
        anchor_p=anchor_p,
        anchor_c=anchor_c,
        jcoord=jcoord,
        jncoords=jncoords,
        mass=mass,
        com=com,
        inertia=inertia,
        mp_seg=np.asarray(mp_seg, dtype=np.int64),
        mp_loc=np.asarray(mp_loc, dtype=np.float64).reshape(len(mp_seg), 3),
        m_off=np.asarray(m_off, dtype=np.int64),
        f_max=f_max,
        body_names=body_order,
        ncoords=len(coords),
    )


# ---------------------------------------------------------------------------
# validation


def validate_model(model: Model) -> list[Violation]:
    """Collect every invariant violation; an empty list means valid."""
    out: list[Violation] = []
    seg_names = {s.name for s in model.segments}

    for s in model.segments:
        if not np.isfinite(s.mass) or s.mass < 0:
            out.append(Violation(s.name, "mass >= 0", f"mass = {s.mass}"))
        inertia = np.asarray(s.inertia, dtype=float)
        if not np.all(np.isfinite(inertia)):
            out.append(Violation(s.name, "finite inertia", "non-finite entry"))
        elif not np.allclose(inertia, inertia.T, atol=1e-9):
            out.append(Violation(s.name, "inertia symmetry", "tensor is not symmetric"))
        else:
            eigvals = np.linalg.eigvalsh(0.5 * (inertia + inertia.T))
            if np.any(eigvals < -1e-9):
                out.append(
                    Violation(s.name, "inertia PSD", f"negative eigenvalue {eigvals.min():.3g}")
                )

    out.extend(_tree_violations(model))

    for j in model.joints:
        if j.kind not in JOINT_KINDS:
            out.append(Violation(j.name, "joint kind", f"unknown kind {j.kind!r}"))
            continue
        for k, ax in enumerate(j.axes):
            norm = float(np.linalg.norm(ax))
            if abs(norm - 1.0) > _UNIT_TOL:
                out.append(
                    Violation(j.name, "axis norm", f"axis {k + 1} has norm {norm:.6g}, expected 1")
                )
        if j.limits and len(j.limits) != j.ncoords:
            out.append(
                Violation(j.name, "limits arity", f"{len(j.limits)} limit pairs for {j.ncoords} coordinates")
            )
        if j.coord_names and len(j.coord_names) != j.ncoords:
            out.append(
                Violation(j.name, "coordinate names arity", f"{len(j.coord_names)} names for {j.ncoords} coordinates")
            )

    group_ids = set()
    for g in model.groups:
        if g.id in group_ids:
            out.append(Violation(g.id, "unique group ids", "duplicate group"))
        group_ids.add(g.id)
        expected = TRUNK_GROUP_ELEMENT_COUNTS.get(g.anatomical_name)
        if expected is not None and g.paper_element_count != expected:
            out.append(
                Violation(
                    g.id,
                    "reference element count",
                    f"{g.anatomical_name} must carry {expected}, got {g.paper_element_count}",
                )
            )

    muscle_names = set()
    for m in model.muscles:
        if m.name in muscle_names:
            out.append(Violation(m.name, "unique muscle names", "duplicate muscle"))
        muscle_names.add(m.name)
        if not np.isfinite(m.f_max) or m.f_max <= 0:
            out.append(Violation(m.name, "f_max > 0", f"f_max = {m.f_max}"))
        if len(m.path) < 2:
            out.append(Violation(m.name, "path length >= 2", f"{len(m.path)} point(s)"))
        for seg_name, _ in m.path:
            if seg_name not in seg_names:
                out.append(Violation(m.name, "path segments exist", f"unknown segment {seg_name!r}"))
        if m.group not in group_ids:
            out.append(Violation(m.name, "group exists", f"unknown group {m.group!r}"))
        if m.side not in ("left", "right", "midline"):
            out.append(Violation(m.name, "side", f"invalid side {m.side!r}"))

    return out


# ---------------------------------------------------------------------------
# document loading

_SEGMENT_FIELDS = {"name", "mass", "com", "inertia"}
_JOINT_FIELDS = {
    "name", "parent", "child", "kind", "axis", "axis2", "axis3",
    "anchor_parent", "anchor_child", "limits", "coords",
}
_MUSCLE_FIELDS = {"name", "group", "side", "path", "f_max"}
_PATH_FIELDS = {"segment", "point"}
_GROUP_FIELDS = {"id", "anatomical_name", "paper_element_count"}
_TOP_FIELDS = {"segments", "joints", "muscles", "groups", "gravity"}


def _check_fields(obj: Mapping, allowed: set, where: str, lenient: bool):
    if not isinstance(obj, Mapping):
        raise ParseError(f"{where}: expected a mapping, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown and not lenient:
        raise ParseError(f"{where}: unknown field(s) {sorted(unknown)}")


def _need(obj: Mapping, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing required field {key!r}")
    return obj[key]


def parse_model_document(doc: str, lenient: bool = False) -> Model:
    """Parse a model document without enforcing domain invariants.

    Raises :class:`ParseError` for malformed documents; the returned
    model may still fail :func:`validate_model`.
    """
    try:
        data = yaml.safe_load(io.StringIO(doc))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ParseError(f"malformed document{loc}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ParseError("top level must be a mapping of sections")
    _check_fields(data, _TOP_FIELDS, "top level", lenient)

    segments = []
    for i, raw in enumerate(data.get("segments") or []):
        where = f"segments[{i}]"
        _check_fields(raw, _SEGMENT_FIELDS, where, lenient)
        try:
            segments.append(
                BodySegment(
                    name=str(_need(raw, "name", where)),
                    mass=float(raw.get("mass", 0.0)),
                    com=_vec3(raw.get("com", (0.0, 0.0, 0.0))),
                    inertia=_mat3(raw.get("inertia", ((0,) * 3,) * 3)),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc

    joints = []
    for i, raw in enumerate(data.get("joints") or []):
        where = f"joints[{i}]"
        _check_fields(raw, _JOINT_FIELDS, where, lenient)
        kind = str(raw.get("kind", "revolute"))
        if kind not in JOINT_KINDS:
            raise ParseError(f"{where}: unknown joint kind {kind!r}")
        try:
            limits_raw = raw.get("limits")
            limits: tuple = ()
            if limits_raw is not None:
                limits = tuple(
                    None if pair is None else (float(pair[0]), float(pair[1]))
                    for pair in limits_raw
                )
            joints.append(
                JointDef(
                    name=str(_need(raw, "name", where)),
                    parent=str(_need(raw, "parent", where)),
                    child=str(_need(raw, "child", where)),
                    kind=kind,
                    axis=_vec3(raw.get("axis", (0.0, 0.0, 1.0))),
                    axis2=_vec3(raw.get("axis2", (0.0, 0.0, 0.0))),
                    axis3=_vec3(raw.get("axis3", (0.0, 0.0, 0.0))),
                    anchor_parent=_vec3(raw.get("anchor_parent", (0.0, 0.0, 0.0))),
                    anchor_child=_vec3(raw.get("anchor_child", (0.0, 0.0, 0.0))),
                    limits=limits,
                    coord_names=tuple(str(c) for c in raw.get("coords") or ()),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc

    muscles = []
    for i, raw in enumerate(data.get("muscles") or []):
        where = f"muscles[{i}]"
        _check_fields(raw, _MUSCLE_FIELDS, where, lenient)
        try:
            path = []
            for k, p in enumerate(raw.get("path") or []):
                _check_fields(p, _PATH_FIELDS, f"{where}.path[{k}]", lenient)
                path.append((str(_need(p, "segment", where)), _vec3(_need(p, "point", where))))
            muscles.append(
                MuscleElement(
                    name=str(_need(raw, "name", where)),
                    group=str(_need(raw, "group", where)),
                    side=str(raw.get("side", "midline")),
                    path=tuple(path),
                    f_max=float(_need(raw, "f_max", where)),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc

    groups = []
    for i, raw in enumerate(data.get("groups") or []):
        where = f"groups[{i}]"
        _check_fields(raw, _GROUP_FIELDS, where, lenient)
        try:
            gid = str(_need(raw, "id", where))
            groups.append(
                MuscleGroup(
                    id=gid,
                    anatomical_name=str(raw.get("anatomical_name", gid)),
                    paper_element_count=int(raw.get("paper_element_count", 0)),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc

    try:
        gravity = _vec3(data.get("gravity", (0.0, -9.81, 0.0)))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"gravity: {exc}") from exc

    return Model(
        segments=tuple(segments),
        joints=tuple(joints),
        muscles=tuple(muscles),
        groups=tuple(groups),
        gravity=gravity,
    )


def load_model(doc: str, lenient: bool = False) -> Model:
    """Parse a model document and return a validated :class:`Model`.

    Raises :class:`ParseError` for malformed documents and
    :class:`ValidationError` when the parsed model breaks an invariant.
    """
    model = parse_model_document(doc, lenient=lenient)
    violations = validate_model(model)
    if violations:
        raise ValidationError(
            "model document is invalid: " + "; ".join(str(v) for v in violations)
        )
    model.coordinates  # derive and freeze the ordering
    return model


def load_model_file(path: str, lenient: bool = False) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return load_model(fh.read(), lenient=lenient)


# ---------------------------------------------------------------------------
# crutch augmentation

CRUTCH_LENGTH = 0.92          # hand grip to tip, meters


def _hand_segment(side: str) -> str:
    return f"arm_{side[0]}"


def crutch_tip_point() -> Vec3:
    """Tip of a crutch in its own frame (origin at the hand grip)."""
    return (0.0, -CRUTCH_LENGTH, 0.0)


def attach_crutches(
    model: Model,
    count: int,
    injured_side: str = "right",
    crutch_side: str | None = None,
    hand_point: Vec3 = (0.0, -0.58, 0.0),
) -> Model:
    """Return a new model with ``count`` crutches hung from the hands.

    Each crutch is one massless segment joined by a two-coordinate swing
    (sagittal, then frontal) about the hand grip.  A single crutch goes on
    the side opposite the injured foot; asking for it on the injured side
    is a :class:`ConfigError`.
    """
    if count not in (0, 1, 2):
        raise ConfigError(f"crutch count must be 0, 1 or 2, got {count}")
    if injured_side not in ("left", "right"):
        raise ConfigError(f"injured_side must be 'left' or 'right', got {injured_side!r}")
    if count == 0:
        return model

    if count == 1:
        opposite = "left" if injured_side == "right" else "right"
        side = crutch_side or opposite
        if side == injured_side:
            raise ConfigError(
                f"a single crutch must be on the non-injured side ({opposite}), "
                f"not on the injured {injured_side} side"
            )
        sides = [side]
    else:
        sides = ["left", "right"]

    segments = list(model.segments)
    joints = list(model.joints)
    for side in sides:
        hand_seg = _hand_segment(side)
        if not model.has_segment(hand_seg):
            raise ConfigError(f"model has no hand attachment segment {hand_seg!r}")
        name = f"crutch_{side[0]}"
        if model.has_segment(name):
            raise ConfigError(f"model already has a segment {name!r}")
        segments.append(BodySegment(name=name, mass=0.0))
        joints.append(
            JointDef(
                name=name,
                parent=hand_seg,
                child=name,
                kind="universal",
                axis=(1.0, 0.0, 0.0),
                axis2=(0.0, 0.0, 1.0),
                anchor_parent=hand_point,
                anchor_child=(0.0, 0.0, 0.0),
                coord_names=(f"{name}_sagittal", f"{name}_frontal"),
            )
        )

    return Model(
        segments=tuple(segments),
        joints=tuple(joints),
        muscles=model.muscles,
        groups=model.groups,
        gravity=model.gravity,
    )


def detach_crutches(model: Model) -> Model:
    """Drop every crutch segment and its joint; inverse of attachment."""
    crutch_names = {s.name for s in model.segments if s.name.startswith("crutch_")}
    if not crutch_names:
        return model
    return Model(
        segments=tuple(s for s in model.segments if s.name not in crutch_names),
        joints=tuple(j for j in model.joints if j.child not in crutch_names),
        muscles=model.muscles,
        groups=model.groups,
        gravity=model.gravity,
    )


def crutch_count(model: Model) -> int:
    return sum(1 for s in model.segments if s.name.startswith("crutch_"))


# ---------------------------------------------------------------------------
# left/right structure helpers


def mirror_name(name: str) -> str:
    """Counterpart of an ``_l``/``_r`` marked name; midline names map to themselves."""
    if name.endswith("_l"):
        return name[:-2] + "_r"
    if name.endswith("_r"):
        return name[:-2] + "_l"
    if "_l_" in name:
        return name.replace("_l_", "_r_", 1)
    if "_r_" in name:
        return name.replace("_r_", "_l_", 1)
    return name


def mirror_point(p: Iterable[float]) -> Vec3:
    x, y, z = p
    return (-float(x), float(y), float(z))
