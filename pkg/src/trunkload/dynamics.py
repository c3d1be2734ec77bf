"""Inverse dynamics: generalized forces that hold a posture.

The recursive Newton-Euler sweep handles full rates, but every shipped
scenario is quasi-static (zero velocities and accelerations), where the
result reduces to the moment balance of gravity plus external loads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backends import kernels
from .errors import UnknownSegmentError
from .kinematics import Posture, check_posture
from .model import Model


@dataclass(frozen=True)
class ExternalLoad:
    """Force/torque applied to a segment.

    ``point`` is in the segment frame; ``force`` and ``torque`` are in the
    ground frame, matching how support reactions are naturally expressed.
    """

    segment: str
    point: tuple[float, float, float]
    force: tuple[float, float, float]
    torque: tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass
class GeneralizedForces:
    """Per-coordinate joint moments (N*m) or forces (N), model ordering."""

    tau: np.ndarray
    coordinates: tuple[str, ...]

    def __getitem__(self, coordinate: str) -> float:
        return float(self.tau[self.coordinates.index(coordinate)])


def inverse_dynamics(
    model: Model, posture: Posture, loads: list[ExternalLoad] | tuple[ExternalLoad, ...] = ()
) -> GeneralizedForces:
    check_posture(model, posture)
    a = model.arrays()
    body_index = {name: i for i, name in enumerate(a.body_names)}

    n_loads = len(loads)
    load_seg = np.zeros(n_loads, dtype=np.int64)
    load_pt = np.zeros((n_loads, 3))
    load_f = np.zeros((n_loads, 3))
    load_t = np.zeros((n_loads, 3))
    for i, ld in enumerate(loads):
        if ld.segment not in body_index:
            raise UnknownSegmentError(ld.segment)
        vals = np.concatenate([ld.point, ld.force, ld.torque]).astype(float)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"non-finite load on segment {ld.segment!r}")
        load_seg[i] = body_index[ld.segment]
        load_pt[i] = ld.point
        load_f[i] = ld.force
        load_t[i] = ld.torque

    tau = kernels.inverse_dynamics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord,
        a.mass, a.com, a.inertia,
        np.ascontiguousarray(posture.q, dtype=np.float64),
        np.ascontiguousarray(posture.qdot, dtype=np.float64),
        np.ascontiguousarray(posture.qddot, dtype=np.float64),
        np.asarray(model.gravity, dtype=np.float64),
        load_seg, load_pt, load_f, load_t,
    )
    return GeneralizedForces(tau=tau, coordinates=model.coordinates)
