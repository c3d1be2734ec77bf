"""Forward kinematics, muscle lengths, and moment arms.

Moment arms follow the standard tendon-excursion definition
``r = -dL/dq``: a positive arm means tension produces positive
generalized force on that coordinate.  Arms are evaluated by central
finite differences; for polyline paths this is exact up to O(h^2).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .backends import kernels
from .errors import DimensionError, UnknownCoordinateError, UnknownMuscleError
from .model import Model

FD_STEP = 1e-5  # rad (or m) central-difference step


@dataclass
class Posture:
    """Generalized coordinate state: positions, velocities, accelerations."""

    q: np.ndarray
    qdot: np.ndarray
    qddot: np.ndarray

    @classmethod
    def zeros(cls, model: Model) -> "Posture":
        n = model.ncoords
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))

    @classmethod
    def from_values(cls, model: Model, values: dict[str, float]) -> "Posture":
        """Build a static posture from a coordinate-name table."""
        q = np.zeros(model.ncoords)
        for name, value in values.items():
            try:
                q[model.coordinate_index(name)] = float(value)
            except KeyError:
                raise UnknownCoordinateError(name) from None
        return cls(q, np.zeros_like(q), np.zeros_like(q))


def check_posture(model: Model, posture: Posture) -> None:
    """Dimension check plus a joint-limit warning sweep."""
    n = model.ncoords
    for label, arr in (("q", posture.q), ("qdot", posture.qdot), ("qddot", posture.qddot)):
        if np.shape(arr) != (n,):
            raise DimensionError(
                f"posture {label} has shape {np.shape(arr)}, model has {n} coordinates"
            )
    coords = model.coordinates
    for joint in model.joints:
        if not joint.limits:
            continue
        names = joint.coord_names or joint.default_coord_names()
        for name, pair in zip(names, joint.limits):
            if pair is None:
                continue
            value = posture.q[coords.index(name)]
            lo, hi = pair
            if value < lo - 1e-12 or value > hi + 1e-12:
                warnings.warn(
                    f"coordinate {name} = {value:.4g} outside limits [{lo:.4g}, {hi:.4g}]",
                    stacklevel=2,
                )


@dataclass
class FramePlacement:
    """Ground-frame placement of every segment for one posture."""

    rotations: np.ndarray     # (nb, 3, 3)
    translations: np.ndarray  # (nb, 3)
    body_names: tuple[str, ...]
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {name: i for i, name in enumerate(self.body_names)}

    def rotation(self, segment: str) -> np.ndarray:
        return self.rotations[self._index[segment]]

    def translation(self, segment: str) -> np.ndarray:
        return self.translations[self._index[segment]]

    def point_to_ground(self, segment: str, point_local) -> np.ndarray:
        i = self._index[segment]
        return self.rotations[i] @ np.asarray(point_local, dtype=float) + self.translations[i]


def forward_kinematics(model: Model, posture: Posture) -> FramePlacement:
    check_posture(model, posture)
    a = model.arrays()
    R, t = kernels.forward_kinematics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord,
        np.ascontiguousarray(posture.q, dtype=np.float64),
    )
    return FramePlacement(R, t, a.body_names)


def _muscle_index(model: Model, muscle: str) -> int:
    for i, m in enumerate(model.muscles):
        if m.name == muscle:
            return i
    raise UnknownMuscleError(muscle)


def muscle_lengths(model: Model, posture: Posture) -> np.ndarray:
    """Length of every muscle, ordered as ``model.muscles``."""
    placement = forward_kinematics(model, posture)
    a = model.arrays()
    return kernels.muscle_lengths(
        placement.rotations, placement.translations, a.mp_seg, a.mp_loc, a.m_off
    )


def muscle_length(model: Model, posture: Posture, muscle: str) -> float:
    return float(muscle_lengths(model, posture)[_muscle_index(model, muscle)])


def moment_arm_matrix(model: Model, posture: Posture, h: float = FD_STEP) -> np.ndarray:
    """All moment arms at once: shape (n_muscles, n_coordinates)."""
    check_posture(model, posture)
    a = model.arrays()
    return kernels.moment_arms(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord,
        a.mp_seg, a.mp_loc, a.m_off,
        np.ascontiguousarray(posture.q, dtype=np.float64), h,
    )


def moment_arm(
    model: Model, posture: Posture, muscle: str, coordinate: str, h: float = FD_STEP
) -> float:
    i = _muscle_index(model, muscle)
    try:
        c = model.coordinate_index(coordinate)
    except KeyError:
        raise UnknownCoordinateError(coordinate) from None
    return float(moment_arm_matrix(model, posture, h=h)[i, c])
