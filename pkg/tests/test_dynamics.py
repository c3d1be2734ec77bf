import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trunkload.dynamics import ExternalLoad, inverse_dynamics
from trunkload.errors import UnknownSegmentError
from trunkload.kinematics import Posture
from trunkload.model import BodySegment, JointDef, Model, mirror_name
from trunkload.scenarios import ScenarioConfig, build_snapshot, mirror_loads, mirror_posture, prepare_case_model

from conftest import make_hinge_model


def test_zero_everything_gives_exact_zero(hinge_model):
    m = Model(
        segments=hinge_model.segments,
        joints=hinge_model.joints,
        muscles=hinge_model.muscles,
        groups=hinge_model.groups,
        gravity=(0.0, 0.0, 0.0),
    )
    gf = inverse_dynamics(m, Posture.zeros(m), [])
    assert np.all(gf.tau == 0.0)


def test_horizontal_pendulum_torque(hinge_model):
    gf = inverse_dynamics(hinge_model, Posture.zeros(hinge_model), [])
    assert abs(gf["hinge"]) == pytest.approx(2.0 * 9.81 * 0.5, rel=1e-9)


def test_hanging_pendulum_zero_torque(hinge_model):
    posture = Posture.from_values(hinge_model, {"hinge": -np.pi / 2})
    gf = inverse_dynamics(hinge_model, posture, [])
    assert abs(gf["hinge"]) <= 1e-12


def test_dynamic_pendulum_matches_analytic(hinge_model):
    # point mass at l = 0.5: tau = m l^2 qdd + m g l cos(q)  (q from horizontal)
    q, qd, qdd = 0.3, 1.1, -2.4
    posture = Posture(np.array([q]), np.array([qd]), np.array([qdd]))
    gf = inverse_dynamics(hinge_model, posture, [])
    expected = 2.0 * 0.25 * qdd + 2.0 * 9.81 * 0.5 * np.cos(q)
    assert gf["hinge"] == pytest.approx(expected, rel=1e-12)


def test_external_load_balances_gravity(hinge_model):
    # upward force at the COM cancels gravity exactly
    load = ExternalLoad("link", point=(0.5, 0.0, 0.0), force=(0.0, 2.0 * 9.81, 0.0))
    gf = inverse_dynamics(hinge_model, Posture.zeros(hinge_model), [load])
    assert abs(gf["hinge"]) <= 1e-12


def test_pure_torque_load(hinge_model):
    m = Model(
        segments=hinge_model.segments, joints=hinge_model.joints,
        muscles=hinge_model.muscles, groups=hinge_model.groups,
        gravity=(0.0, 0.0, 0.0),
    )
    load = ExternalLoad("link", point=(0.0, 0.0, 0.0), force=(0.0, 0.0, 0.0),
                        torque=(0.0, 0.0, 3.5))
    gf = inverse_dynamics(m, Posture.zeros(m), [load])
    assert gf["hinge"] == pytest.approx(-3.5, rel=1e-12)


def test_unknown_segment_load(hinge_model):
    with pytest.raises(UnknownSegmentError):
        inverse_dynamics(
            hinge_model, Posture.zeros(hinge_model),
            [ExternalLoad("nope", (0, 0, 0), (0, 1, 0))],
        )


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_linearity_in_loads(model, seed):
    rng = np.random.default_rng(seed)
    posture = Posture.from_values(
        model, {"lumbar_flexion": rng.uniform(-0.3, 0.3), "hip_r_sagittal": rng.uniform(-0.3, 0.3)}
    )
    segs = ("thorax", "foot_l", "arm_r", "pelvis")

    def rand_loads(n):
        return [
            ExternalLoad(
                segs[rng.integers(len(segs))],
                point=tuple(rng.uniform(-0.2, 0.2, 3)),
                force=tuple(rng.uniform(-300, 300, 3)),
                torque=tuple(rng.uniform(-20, 20, 3)),
            )
            for _ in range(n)
        ]

    la, lb = rand_loads(2), rand_loads(3)
    tau_a = inverse_dynamics(model, posture, la).tau
    tau_b = inverse_dynamics(model, posture, lb).tau
    tau_ab = inverse_dynamics(model, posture, la + lb).tau
    tau_0 = inverse_dynamics(model, posture, []).tau
    scale = np.maximum(1.0, np.abs(tau_ab))
    assert np.max(np.abs(tau_ab - (tau_a + tau_b - tau_0)) / scale) <= 1e-9


def test_gravity_scaling_linearity(model):
    posture = Posture.from_values(model, {"lumbar_flexion": 0.25})
    tau1 = inverse_dynamics(model, posture, []).tau
    scaled = Model(model.segments, model.joints, model.muscles, model.groups,
                   (0.0, -9.81 * 2.5, 0.0))
    tau2 = inverse_dynamics(scaled, posture, []).tau
    assert np.allclose(tau2, 2.5 * tau1, rtol=1e-12, atol=1e-12)


def test_mirror_negates_lateral_preserves_sagittal(model):
    # double-crutch model is structurally mirror-complete; drive it with
    # deliberately lopsided posture and loads
    case_model = prepare_case_model(model, ScenarioConfig(case="double_crutch"))
    posture = Posture.from_values(
        case_model,
        {
            "lumbar_bending": 0.21,
            "lumbar_flexion": 0.07,
            "lumbar_rotation": -0.1,
            "hip_l_sagittal": 0.3,
            "shoulder_l_frontal": 0.2,
            "crutch_l_frontal": 0.15,
        },
    )
    loads = [
        ExternalLoad("foot_l", (0.0, -0.08, 0.0), (0.0, 410.0, 0.0)),
        ExternalLoad("foot_r", (0.0, -0.08, 0.0), (0.0, 80.0, 0.0)),
        ExternalLoad("crutch_l", (0.0, -0.92, 0.0), (12.0, 210.0, -9.0)),
    ]
    tau = inverse_dynamics(case_model, posture, loads).tau

    m_posture = mirror_posture(case_model, posture)
    m_loads = mirror_loads(case_model, loads)
    m_tau = inverse_dynamics(case_model, m_posture, m_loads).tau

    coords = case_model.coordinates
    from trunkload.scenarios import coordinate_mirror

    mapping = coordinate_mirror(case_model)
    scale = np.maximum(1.0, np.abs(tau))
    for src, (dst, sign) in enumerate(mapping):
        assert m_tau[dst] == pytest.approx(sign * tau[src], abs=1e-9 * scale[src]), coords[src]
