"""Pure-numpy reference implementations of the numeric kernels.

These are the fallback path used when numba is unavailable or disabled
via ``TRUNKLOAD_PURE_NUMPY=1``.  The jitted twins in
:mod:`trunkload.backends.numba_kernels` must agree with these within
floating-point noise; ``tests/test_backends.py`` enforces that.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_KIND_REVOLUTE = 0
_KIND_PRISMATIC = 1
_KIND_FIXED = 2
_KIND_UNIVERSAL = 3
_KIND_BALL = 4


def _axis_rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    x, y, z = axis
    c = np.cos(angle)
    s = np.sin(angle)
    t = 1.0 - c
    return np.array(
        [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ]
    )


def forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, q):
    """Ground-frame rotation and origin of every body, tree pre-order."""
    nb = parent.shape[0]
    R = np.zeros((nb, 3, 3))
    t = np.zeros((nb, 3))
    R[0] = np.eye(3)
    for b in range(1, nb):
        p = parent[b]
        Rp = R[p]
        w = Rp @ anchor_p[b] + t[p]
        kind = jkind[b]
        Rb = Rp.copy()
        shift = np.zeros(3)
        if kind == _KIND_REVOLUTE or kind == _KIND_UNIVERSAL or kind == _KIND_BALL:
            n = 1 if kind == _KIND_REVOLUTE else (2 if kind == _KIND_UNIVERSAL else 3)
            for k in range(n):
                Rb = Rb @ _axis_rotation(jaxes[b, k], q[jcoord[b] + k])
        elif kind == _KIND_PRISMATIC:
            shift = Rp @ (jaxes[b, 0] * q[jcoord[b]])
        R[b] = Rb
        t[b] = w + shift - Rb @ anchor_c[b]
    return R, t


def muscle_lengths(R, t, mp_seg, mp_loc, m_off):
    """Polyline length of every muscle at the given placements."""
    world = np.einsum("pij,pj->pi", R[mp_seg], mp_loc) + t[mp_seg]
    nm = m_off.shape[0] - 1
    out = np.zeros(nm)
    for m in range(nm):
        pts = world[m_off[m]: m_off[m + 1]]
        out[m] = np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1))
    return out


def moment_arms(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, mp_seg, mp_loc, m_off, q, h):
    """Central-difference moment arms, one row per muscle, one column per coordinate."""
    nc = q.shape[0]
    nm = m_off.shape[0] - 1
    arms = np.zeros((nm, nc))
    qp = q.copy()
    for c in range(nc):
        q0 = qp[c]
        qp[c] = q0 + h
        R, t = forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, qp)
        lp = muscle_lengths(R, t, mp_seg, mp_loc, m_off)
        qp[c] = q0 - h
        R, t = forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, qp)
        lm = muscle_lengths(R, t, mp_seg, mp_loc, m_off)
        qp[c] = q0
        arms[:, c] = -(lp - lm) / (2.0 * h)
    return arms


def inverse_dynamics(
    parent, jkind, jaxes, anchor_p, anchor_c, jcoord,
    mass, com, inertia,
    q, qd, qdd, gravity,
    load_seg, load_pt, load_f, load_t,
):
    """Recursive Newton-Euler generalized forces in ground-frame quantities.

    Loads are (body index, local point, ground-frame force, ground-frame
    torque) tuples flattened into arrays.  The base acceleration trick
    (root accelerates at ``-gravity``) folds gravity into the sweep.
    """
    nb = parent.shape[0]
    nc = q.shape[0]
    R, t = forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, q)

    omega = np.zeros((nb, 3))
    alpha = np.zeros((nb, 3))
    a_origin = np.zeros((nb, 3))       # body-origin acceleration incl. -g offset
    joint_pos = np.zeros((nb, 3))
    axis_world = np.zeros((nb, 3, 3))  # per-coordinate world axes

    a_origin[0] = -gravity

    for b in range(1, nb):
        p = parent[b]
        w = R[p] @ anchor_p[b] + t[p]
        joint_pos[b] = w
        rw = w - t[p]
        a_w = a_origin[p] + np.cross(alpha[p], rw) + np.cross(omega[p], np.cross(omega[p], rw))
        om = omega[p].copy()
        al = alpha[p].copy()
        kind = jkind[b]
        if kind == _KIND_PRISMATIC:
            s = R[p] @ jaxes[b, 0]
            axis_world[b, 0] = s
            rate = qd[jcoord[b]]
            acc = qdd[jcoord[b]]
            rb = t[b] - w
            a_origin[b] = (
                a_w
                + np.cross(al, rb)
                + np.cross(om, np.cross(om, rb))
                + 2.0 * np.cross(om, s * rate)
                + s * acc
            )
            omega[b] = om
            alpha[b] = al
        else:
            n = {_KIND_REVOLUTE: 1, _KIND_UNIVERSAL: 2, _KIND_BALL: 3}.get(int(kind), 0)
            Rcur = R[p].copy()
            for k in range(n):
                ax = Rcur @ jaxes[b, k]
                axis_world[b, k] = ax
                rate = qd[jcoord[b] + k]
                acc = qdd[jcoord[b] + k]
                al = al + ax * acc + np.cross(om, ax * rate)
                om = om + ax * rate
                Rcur = Rcur @ _axis_rotation(jaxes[b, k], q[jcoord[b] + k])
            rb = t[b] - w
            a_origin[b] = a_w + np.cross(al, rb) + np.cross(om, np.cross(om, rb))
            omega[b] = om
            alpha[b] = al

    # per-body Newton-Euler wrenches about each body's joint point
    F = np.zeros((nb, 3))
    N = np.zeros((nb, 3))
    for b in range(nb):
        c_w = R[b] @ com[b] + t[b]
        rc = c_w - t[b]
        a_c = a_origin[b] + np.cross(alpha[b], rc) + np.cross(omega[b], np.cross(omega[b], rc))
        I_w = R[b] @ inertia[b] @ R[b].T
        F[b] = mass[b] * a_c
        N[b] = I_w @ alpha[b] + np.cross(omega[b], I_w @ omega[b])

    for li in range(load_seg.shape[0]):
        b = load_seg[li]
        x = R[b] @ load_pt[li] + t[b]
        c_w = R[b] @ com[b] + t[b]
        F[b] -= load_f[li]
        N[b] -= np.cross(x - c_w, load_f[li]) + load_t[li]

    tau = np.zeros(nc)
    G = np.zeros((nb, 3))   # accumulated subtree force
    M = np.zeros((nb, 3))   # accumulated subtree moment about own joint point
    for b in range(nb - 1, 0, -1):
        c_w = R[b] @ com[b] + t[b]
        G[b] += F[b]
        M[b] += N[b] + np.cross(c_w - joint_pos[b], F[b])
        p = parent[b]
        G[p] += G[b]
        M[p] += M[b] + np.cross(joint_pos[b] - joint_pos[p], G[b])
        kind = jkind[b]
        if kind == _KIND_PRISMATIC:
            tau[jcoord[b]] = axis_world[b, 0] @ G[b]
        elif kind != _KIND_FIXED:
            n = {_KIND_REVOLUTE: 1, _KIND_UNIVERSAL: 2, _KIND_BALL: 3}[int(kind)]
            for k in range(n):
                tau[jcoord[b] + k] = axis_world[b, k] @ M[b]
    return tau


def solve_box(C, tau_eff, p, beta, a0, max_iters, grad_tol):
    """Projected-Newton minimization of ``sum(a^p) + beta/2 * ||C a - tau||^2``
    over the box ``0 <= a <= 1``.

    Returns ``(a, iterations, converged)``; convergence is a projected-
    gradient infinity-norm test against ``grad_tol``.
    """
    nm = C.shape[1]
    a = np.clip(a0.astype(np.float64), 0.0, 1.0)
    H_quad = beta * (C.T @ C)
    iters = 0
    converged = False
    for it in range(max_iters):
        iters = it + 1
        resid = C @ a - tau_eff
        grad = p * a ** (p - 1) + beta * (C.T @ resid)
        pg = grad.copy()
        pg[(a <= 0.0) & (grad > 0.0)] = 0.0
        pg[(a >= 1.0) & (grad < 0.0)] = 0.0
        if np.max(np.abs(pg)) <= grad_tol:
            converged = True
            break
        free = ~(((a <= 0.0) & (grad > 0.0)) | ((a >= 1.0) & (grad < 0.0)))
        idx = np.where(free)[0]
        H = H_quad[np.ix_(idx, idx)].copy()
        if p == 2:
            H[np.diag_indices_from(H)] += 2.0
        elif p == 3:
            H[np.diag_indices_from(H)] += 6.0 * a[idx]
        H[np.diag_indices_from(H)] += 1e-12 * (1.0 + np.trace(H) / max(1, idx.size))
        try:
            step = np.linalg.solve(H, -grad[idx])
        except np.linalg.LinAlgError:
            step = -grad[idx]
        obj0 = np.sum(a ** p) + 0.5 * beta * (resid @ resid)
        gdotd = grad[idx] @ step
        alpha = 1.0
        improved = False
        for _ in range(60):
            trial = a.copy()
            trial[idx] = np.clip(a[idx] + alpha * step, 0.0, 1.0)
            r = C @ trial - tau_eff
            obj = np.sum(trial ** p) + 0.5 * beta * (r @ r)
            delta = np.sum((trial - a) ** 2)
            if obj <= obj0 + 1e-4 * alpha * gdotd or (obj < obj0 and delta > 0.0):
                a = trial
                improved = True
                break
            alpha *= 0.5
        if not improved:
            # no progress possible at floating precision
            converged = np.max(np.abs(pg)) <= max(grad_tol, 1e-7 * (1.0 + abs(obj0)))
            break
    return a, iters, converged


def oracle_grid(C, tau, p, step, slack):
    """Exhaustive grid search over activation vectors on ``{0, step, .., 1}^n``.

    Keeps points whose per-coordinate residual is within ``slack`` and
    returns the first minimum-objective point in lexicographic order.
    Returns ``(a, objective, found)``.
    """
    nc, nm = C.shape
    nsteps = int(round(1.0 / step)) + 1
    levels = np.arange(nsteps) * step
    levels[-1] = 1.0
    total = nsteps ** nm
    best_obj = np.inf
    best_a = np.zeros(nm)
    found = False
    chunk = 1 << 18
    divisors = nsteps ** np.arange(nm - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = (idx[:, None] // divisors) % nsteps
        a = levels[digits]
        resid = a @ C.T - tau
        feas = np.all(np.abs(resid) <= slack, axis=1)
        if not np.any(feas):
            continue
        # sequential accumulation mirrors the jitted twin's summation order
        obj = np.zeros(stop - start)
        for i in range(nm):
            obj += a[:, i] ** p
        obj[~feas] = np.inf
        j = int(np.argmin(obj))
        if obj[j] < best_obj:
            best_obj = obj[j]
            best_a = a[j].copy()
            found = True
    return best_a, best_obj, found
