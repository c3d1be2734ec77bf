"""Cross-backend agreement: the jitted kernels must match the numpy path."""

import numpy as np
import pytest

from trunkload.kinematics import Posture
from trunkload.model import BodySegment, JointDef, Model, MuscleElement, MuscleGroup
from trunkload.scenarios import ScenarioConfig, build_snapshot, prepare_case_model
from trunkload.pipeline import default_model

numba_kernels = pytest.importorskip("trunkload.backends.numba_kernels")
from trunkload.backends import numpy_kernels  # noqa: E402


def _random_chain_model(rng, n_bodies=6):
    """Random serial chain mixing every joint kind."""
    kinds = ["revolute", "prismatic", "universal", "ball", "fixed"]
    segments = [BodySegment("ground")]
    joints = []
    for i in range(n_bodies):
        name = f"b{i}"
        segments.append(
            BodySegment(
                name,
                mass=float(rng.uniform(0.5, 5.0)),
                com=tuple(rng.uniform(-0.2, 0.2, 3)),
                inertia=tuple(tuple(row) for row in np.diag(rng.uniform(0.01, 0.3, 3))),
            )
        )
        kind = kinds[int(rng.integers(len(kinds)))]
        axes = np.eye(3)[rng.permutation(3)]
        joints.append(
            JointDef(
                f"j{i}",
                parent=segments[-2].name,
                child=name,
                kind=kind,
                axis=tuple(axes[0]),
                axis2=tuple(axes[1]),
                axis3=tuple(axes[2]),
                anchor_parent=tuple(rng.uniform(-0.3, 0.3, 3)),
                anchor_child=tuple(rng.uniform(-0.1, 0.1, 3)),
            )
        )
    muscles = tuple(
        MuscleElement(
            f"m{k}", "g", "midline",
            (
                (segments[int(rng.integers(len(segments)))].name, tuple(rng.uniform(-0.3, 0.3, 3))),
                (segments[int(rng.integers(len(segments)))].name, tuple(rng.uniform(-0.3, 0.3, 3))),
                (segments[int(rng.integers(len(segments)))].name, tuple(rng.uniform(-0.3, 0.3, 3))),
            ),
            float(rng.uniform(100, 2000)),
        )
        for k in range(4)
    )
    return Model(
        segments=tuple(segments), joints=tuple(joints), muscles=muscles,
        groups=(MuscleGroup("g", "other"),),
    )


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_kinematic_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    model = _random_chain_model(rng)
    a = model.arrays()
    q = rng.uniform(-1.0, 1.0, model.ncoords)

    Rn, tn = numpy_kernels.forward_kinematics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord, q)
    Rb, tb = numba_kernels.forward_kinematics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord, q)
    assert np.max(np.abs(Rn - Rb)) <= 1e-13
    assert np.max(np.abs(tn - tb)) <= 1e-13

    Ln = numpy_kernels.muscle_lengths(Rn, tn, a.mp_seg, a.mp_loc, a.m_off)
    Lb = numba_kernels.muscle_lengths(Rb, tb, a.mp_seg, a.mp_loc, a.m_off)
    assert np.max(np.abs(Ln - Lb)) <= 1e-13

    An = numpy_kernels.moment_arms(a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c,
                                   a.jcoord, a.mp_seg, a.mp_loc, a.m_off, q, 1e-5)
    Ab = numba_kernels.moment_arms(a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c,
                                   a.jcoord, a.mp_seg, a.mp_loc, a.m_off, q, 1e-5)
    assert np.max(np.abs(An - Ab)) <= 1e-10


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_dynamics_kernel_agrees(seed):
    rng = np.random.default_rng(seed)
    model = _random_chain_model(rng)
    a = model.arrays()
    q = rng.uniform(-1.0, 1.0, model.ncoords)
    qd = rng.uniform(-2.0, 2.0, model.ncoords)
    qdd = rng.uniform(-5.0, 5.0, model.ncoords)
    g = np.array([0.0, -9.81, 0.0])
    nb = a.parent.shape[0]
    n_loads = 3
    ls = rng.integers(0, nb, n_loads).astype(np.int64)
    lp = rng.uniform(-0.2, 0.2, (n_loads, 3))
    lf = rng.uniform(-200, 200, (n_loads, 3))
    lt = rng.uniform(-10, 10, (n_loads, 3))

    tn = numpy_kernels.inverse_dynamics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord,
        a.mass, a.com, a.inertia, q, qd, qdd, g, ls, lp, lf, lt)
    tb = numba_kernels.inverse_dynamics(
        a.parent, a.jkind, a.jaxes, a.anchor_p, a.anchor_c, a.jcoord,
        a.mass, a.com, a.inertia, q, qd, qdd, g, ls, lp, lf, lt)
    scale = np.maximum(1.0, np.abs(tn))
    assert np.max(np.abs(tn - tb) / scale) <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_solver_kernel_agrees(seed):
    rng = np.random.default_rng(seed)
    nm, nc = int(rng.integers(2, 8)), int(rng.integers(1, 4))
    C = rng.uniform(-120, 120, (nc, nm))
    tau = rng.uniform(-60, 60, nc)
    for p in (1, 2, 3):
        an, _, _ = numpy_kernels.solve_box(C, tau, p, 0.2, np.zeros(nm), 300, 1e-11)
        ab, _, _ = numba_kernels.solve_box(C, tau, p, 0.2, np.zeros(nm), 300, 1e-11)
        assert np.max(np.abs(an - ab)) <= 1e-8


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_oracle_kernel_agrees(seed):
    rng = np.random.default_rng(seed)
    nm, nc = int(rng.integers(1, 5)), int(rng.integers(1, 3))
    C = rng.uniform(-120, 120, (nc, nm))
    a_star = rng.integers(0, 21, nm) * 0.05
    tau = C @ a_star
    slack = 0.5 * 0.05 * np.max(np.abs(C), axis=1) + 1e-9 * np.maximum(1.0, np.abs(tau))
    on = numpy_kernels.oracle_grid(C, tau, 2, 0.05, slack)
    ob = numba_kernels.oracle_grid(C, tau, 2, 0.05, slack)
    assert on[2] == ob[2]
    if on[2]:
        assert abs(on[1] - ob[1]) <= 1e-12


def test_full_pipeline_matches_between_backends(monkeypatch):
    """The whole single-crutch analysis agrees across kernel paths."""
    from trunkload import backends
    from trunkload.dynamics import inverse_dynamics
    from trunkload.optimizer import solve_static_optimization

    model = prepare_case_model(default_model(), ScenarioConfig(case="single_crutch"))
    snap = build_snapshot(ScenarioConfig(case="single_crutch"), model)

    results = {}
    for name, kern in (("numpy", numpy_kernels), ("numba", numba_kernels)):
        monkeypatch.setattr(backends, "kernels", kern)
        monkeypatch.setattr("trunkload.kinematics.kernels", kern)
        monkeypatch.setattr("trunkload.dynamics.kernels", kern)
        monkeypatch.setattr("trunkload.optimizer.kernels", kern)
        gf = inverse_dynamics(model, snap.posture, list(snap.loads))
        sol = solve_static_optimization(model, snap.posture, gf)
        results[name] = (gf.tau.copy(), sol.activations.copy())
    assert np.max(np.abs(results["numpy"][0] - results["numba"][0])) <= 1e-10
    assert np.max(np.abs(results["numpy"][1] - results["numba"][1])) <= 1e-8
