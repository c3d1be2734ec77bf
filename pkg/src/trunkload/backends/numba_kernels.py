"""Jitted kernels; the hot path when numba is importable and not disabled.

Signatures and results mirror :mod:`trunkload.backends.numpy_kernels`.
``fastmath`` stays off so both backends round identically enough for the
cross-backend agreement tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"

_KIND_REVOLUTE = 0
_KIND_PRISMATIC = 1
_KIND_FIXED = 2
_KIND_UNIVERSAL = 3
_KIND_BALL = 4


@njit(cache=True)
def _axis_rotation(axis, angle):
    x = axis[0]
    y = axis[1]
    z = axis[2]
    c = np.cos(angle)
    s = np.sin(angle)
    t = 1.0 - c
    out = np.empty((3, 3))
    out[0, 0] = c + x * x * t
    out[0, 1] = x * y * t - z * s
    out[0, 2] = x * z * t + y * s
    out[1, 0] = y * x * t + z * s
    out[1, 1] = c + y * y * t
    out[1, 2] = y * z * t - x * s
    out[2, 0] = z * x * t - y * s
    out[2, 1] = z * y * t + x * s
    out[2, 2] = c + z * z * t
    return out


@njit(cache=True)
def _mat3_mul(A, B):
    out = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            acc = 0.0
            for k in range(3):
                acc += A[i, k] * B[k, j]
            out[i, j] = acc
    return out


@njit(cache=True)
def _mat3_vec(A, v):
    out = np.zeros(3)
    for i in range(3):
        out[i] = A[i, 0] * v[0] + A[i, 1] * v[1] + A[i, 2] * v[2]
    return out


@njit(cache=True)
def _cross(a, b):
    out = np.empty(3)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


@njit(cache=True)
def _kind_nrot(kind):
    if kind == _KIND_REVOLUTE:
        return 1
    if kind == _KIND_UNIVERSAL:
        return 2
    if kind == _KIND_BALL:
        return 3
    return 0


@njit(cache=True)
def forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, q):
    nb = parent.shape[0]
    R = np.zeros((nb, 3, 3))
    t = np.zeros((nb, 3))
    for i in range(3):
        R[0, i, i] = 1.0
    for b in range(1, nb):
        p = parent[b]
        Rp = R[p]
        w = _mat3_vec(Rp, anchor_p[b]) + t[p]
        kind = jkind[b]
        Rb = Rp.copy()
        shift = np.zeros(3)
        nrot = _kind_nrot(kind)
        if nrot > 0:
            for k in range(nrot):
                Rb = _mat3_mul(Rb, _axis_rotation(jaxes[b, k], q[jcoord[b] + k]))
        elif kind == _KIND_PRISMATIC:
            shift = _mat3_vec(Rp, jaxes[b, 0] * q[jcoord[b]])
        R[b] = Rb
        t[b] = w + shift - _mat3_vec(Rb, anchor_c[b])
    return R, t


@njit(cache=True)
def muscle_lengths(R, t, mp_seg, mp_loc, m_off):
    nm = m_off.shape[0] - 1
    out = np.zeros(nm)
    for m in range(nm):
        total = 0.0
        lo = m_off[m]
        hi = m_off[m + 1]
        prev = _mat3_vec(R[mp_seg[lo]], mp_loc[lo]) + t[mp_seg[lo]]
        for k in range(lo + 1, hi):
            cur = _mat3_vec(R[mp_seg[k]], mp_loc[k]) + t[mp_seg[k]]
            dx = cur[0] - prev[0]
            dy = cur[1] - prev[1]
            dz = cur[2] - prev[2]
            total += np.sqrt(dx * dx + dy * dy + dz * dz)
            prev = cur
        out[m] = total
    return out


@njit(cache=True)
def moment_arms(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, mp_seg, mp_loc, m_off, q, h):
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
        for m in range(nm):
            arms[m, c] = -(lp[m] - lm[m]) / (2.0 * h)
    return arms


@njit(cache=True)
def inverse_dynamics(
    parent, jkind, jaxes, anchor_p, anchor_c, jcoord,
    mass, com, inertia,
    q, qd, qdd, gravity,
    load_seg, load_pt, load_f, load_t,
):
    nb = parent.shape[0]
    nc = q.shape[0]
    R, t = forward_kinematics(parent, jkind, jaxes, anchor_p, anchor_c, jcoord, q)

    omega = np.zeros((nb, 3))
    alpha = np.zeros((nb, 3))
    a_origin = np.zeros((nb, 3))
    joint_pos = np.zeros((nb, 3))
    axis_world = np.zeros((nb, 3, 3))

    a_origin[0] = -gravity

    for b in range(1, nb):
        p = parent[b]
        w = _mat3_vec(R[p], anchor_p[b]) + t[p]
        joint_pos[b] = w
        rw = w - t[p]
        a_w = (
            a_origin[p]
            + _cross(alpha[p], rw)
            + _cross(omega[p], _cross(omega[p], rw))
        )
        om = omega[p].copy()
        al = alpha[p].copy()
        kind = jkind[b]
        if kind == _KIND_PRISMATIC:
            s = _mat3_vec(R[p], jaxes[b, 0])
            axis_world[b, 0] = s
            rate = qd[jcoord[b]]
            acc = qdd[jcoord[b]]
            rb = t[b] - w
            a_origin[b] = (
                a_w
                + _cross(al, rb)
                + _cross(om, _cross(om, rb))
                + 2.0 * _cross(om, s * rate)
                + s * acc
            )
            omega[b] = om
            alpha[b] = al
        else:
            nrot = _kind_nrot(kind)
            Rcur = R[p].copy()
            for k in range(nrot):
                ax = _mat3_vec(Rcur, jaxes[b, k])
                axis_world[b, k] = ax
                rate = qd[jcoord[b] + k]
                acc = qdd[jcoord[b] + k]
                al = al + ax * acc + _cross(om, ax * rate)
                om = om + ax * rate
                Rcur = _mat3_mul(Rcur, _axis_rotation(jaxes[b, k], q[jcoord[b] + k]))
            rb = t[b] - w
            a_origin[b] = a_w + _cross(al, rb) + _cross(om, _cross(om, rb))
            omega[b] = om
            alpha[b] = al

    F = np.zeros((nb, 3))
    N = np.zeros((nb, 3))
    for b in range(nb):
        c_w = _mat3_vec(R[b], com[b]) + t[b]
        rc = c_w - t[b]
        a_c = a_origin[b] + _cross(alpha[b], rc) + _cross(omega[b], _cross(omega[b], rc))
        I_w = _mat3_mul(_mat3_mul(R[b], inertia[b]), R[b].T.copy())
        F[b] = mass[b] * a_c
        N[b] = _mat3_vec(I_w, alpha[b]) + _cross(omega[b], _mat3_vec(I_w, omega[b]))

    for li in range(load_seg.shape[0]):
        b = load_seg[li]
        x = _mat3_vec(R[b], load_pt[li]) + t[b]
        c_w = _mat3_vec(R[b], com[b]) + t[b]
        F[b] = F[b] - load_f[li]
        N[b] = N[b] - _cross(x - c_w, load_f[li]) - load_t[li]

    tau = np.zeros(nc)
    G = np.zeros((nb, 3))
    M = np.zeros((nb, 3))
    for b in range(nb - 1, 0, -1):
        c_w = _mat3_vec(R[b], com[b]) + t[b]
        G[b] = G[b] + F[b]
        M[b] = M[b] + N[b] + _cross(c_w - joint_pos[b], F[b])
        p = parent[b]
        G[p] = G[p] + G[b]
        M[p] = M[p] + M[b] + _cross(joint_pos[b] - joint_pos[p], G[b])
        kind = jkind[b]
        if kind == _KIND_PRISMATIC:
            tau[jcoord[b]] = (
                axis_world[b, 0, 0] * G[b, 0]
                + axis_world[b, 0, 1] * G[b, 1]
                + axis_world[b, 0, 2] * G[b, 2]
            )
        elif kind != _KIND_FIXED:
            nrot = _kind_nrot(kind)
            for k in range(nrot):
                tau[jcoord[b] + k] = (
                    axis_world[b, k, 0] * M[b, 0]
                    + axis_world[b, k, 1] * M[b, 1]
                    + axis_world[b, k, 2] * M[b, 2]
                )
    return tau


@njit(cache=True)
def solve_box(C, tau_eff, p, beta, a0, max_iters, grad_tol):
    nc = C.shape[0]
    nm = C.shape[1]
    a = np.empty(nm)
    for i in range(nm):
        a[i] = min(1.0, max(0.0, a0[i]))
    H_quad = np.zeros((nm, nm))
    for i in range(nm):
        for j in range(nm):
            acc = 0.0
            for k in range(nc):
                acc += C[k, i] * C[k, j]
            H_quad[i, j] = beta * acc
    iters = 0
    converged = False
    for it in range(max_iters):
        iters = it + 1
        resid = np.zeros(nc)
        for k in range(nc):
            acc = 0.0
            for i in range(nm):
                acc += C[k, i] * a[i]
            resid[k] = acc - tau_eff[k]
        grad = np.empty(nm)
        for i in range(nm):
            acc = 0.0
            for k in range(nc):
                acc += C[k, i] * resid[k]
            grad[i] = p * a[i] ** (p - 1) + beta * acc
        pg_max = 0.0
        for i in range(nm):
            pg = grad[i]
            if a[i] <= 0.0 and grad[i] > 0.0:
                pg = 0.0
            if a[i] >= 1.0 and grad[i] < 0.0:
                pg = 0.0
            pg_max = max(pg_max, abs(pg))
        if pg_max <= grad_tol:
            converged = True
            break
        nfree = 0
        idx = np.empty(nm, dtype=np.int64)
        for i in range(nm):
            clamped = (a[i] <= 0.0 and grad[i] > 0.0) or (a[i] >= 1.0 and grad[i] < 0.0)
            if not clamped:
                idx[nfree] = i
                nfree += 1
        H = np.empty((nfree, nfree))
        trace = 0.0
        for ii in range(nfree):
            for jj in range(nfree):
                H[ii, jj] = H_quad[idx[ii], idx[jj]]
        for ii in range(nfree):
            if p == 2:
                H[ii, ii] += 2.0
            elif p == 3:
                H[ii, ii] += 6.0 * a[idx[ii]]
            trace += H[ii, ii]
        reg = 1e-12 * (1.0 + trace / max(1, nfree))
        for ii in range(nfree):
            H[ii, ii] += reg
        rhs = np.empty(nfree)
        for ii in range(nfree):
            rhs[ii] = -grad[idx[ii]]
        step = np.linalg.solve(H, rhs)
        obj0 = 0.0
        for i in range(nm):
            obj0 += a[i] ** p
        racc = 0.0
        for k in range(nc):
            racc += resid[k] * resid[k]
        obj0 += 0.5 * beta * racc
        gdotd = 0.0
        for ii in range(nfree):
            gdotd += grad[idx[ii]] * step[ii]
        alpha = 1.0
        improved = False
        for _ls in range(60):
            trial = a.copy()
            delta = 0.0
            for ii in range(nfree):
                i = idx[ii]
                v = min(1.0, max(0.0, a[i] + alpha * step[ii]))
                delta += (v - a[i]) ** 2
                trial[i] = v
            obj = 0.0
            for i in range(nm):
                obj += trial[i] ** p
            racc = 0.0
            for k in range(nc):
                acc = 0.0
                for i in range(nm):
                    acc += C[k, i] * trial[i]
                r = acc - tau_eff[k]
                racc += r * r
            obj += 0.5 * beta * racc
            if obj <= obj0 + 1e-4 * alpha * gdotd or (obj < obj0 and delta > 0.0):
                a = trial
                improved = True
                break
            alpha *= 0.5
        if not improved:
            converged = pg_max <= max(grad_tol, 1e-7 * (1.0 + abs(obj0)))
            break
    return a, iters, converged


@njit(cache=True)
def oracle_grid(C, tau, p, step, slack):
    nc = C.shape[0]
    nm = C.shape[1]
    nsteps = int(round(1.0 / step)) + 1
    levels = np.empty(nsteps)
    for i in range(nsteps):
        levels[i] = i * step
    levels[nsteps - 1] = 1.0
    total = 1
    for _ in range(nm):
        total *= nsteps
    best_obj = np.inf
    best_a = np.zeros(nm)
    found = False
    a = np.zeros(nm)
    digits = np.zeros(nm, dtype=np.int64)
    for point in range(total):
        rem = point
        for i in range(nm - 1, -1, -1):
            digits[i] = rem % nsteps
            rem //= nsteps
        for i in range(nm):
            a[i] = levels[digits[i]]
        feasible = True
        for k in range(nc):
            acc = 0.0
            for i in range(nm):
                acc += C[k, i] * a[i]
            if abs(acc - tau[k]) > slack[k]:
                feasible = False
                break
        if not feasible:
            continue
        obj = 0.0
        for i in range(nm):
            obj += a[i] ** p
        if obj < best_obj:
            best_obj = obj
            best_a = a.copy()
            found = True
    return best_a, best_obj, found
