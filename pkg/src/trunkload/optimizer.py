"""Static optimization: distribute joint moments across bounded muscles.

The problem solved per snapshot is

    minimize    sum_i a_i^p  +  w * sum_j (reserve_j / s)^2
    subject to  sum_i a_i * f_max_i * r_ij + reserve_j = tau_j
                0 <= a_i <= 1

with ``s = max(1, max_j |tau_j|)``.  Reserve actuators keep the problem
feasible on coordinates no muscle spans and expose uncovered moments.
With reserves disabled the equality must hold exactly, enforced by an
augmented-Lagrangian loop around the same box solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backends import kernels
from .errors import ConfigError, DimensionError, InfeasibleError, OracleTooLargeError
from .dynamics import GeneralizedForces
from .kinematics import Posture, moment_arm_matrix
from .model import Model

_ORACLE_MAX_MUSCLES = 6
_ORACLE_MAX_POINTS = 300_000_000


@dataclass(frozen=True)
class SolverParams:
    exponent: int = 2
    reserve_weight: float = 1e3
    max_iters: int = 200
    tolerance: float = 1e-8
    reserves_enabled: bool = True

    def __post_init__(self):
        if self.exponent not in (1, 2, 3):
            raise ConfigError(f"exponent must be 1, 2 or 3, got {self.exponent}")
        if not self.reserve_weight > 0:
            raise ConfigError(f"reserve_weight must be positive, got {self.reserve_weight}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class ActivationSolution:
    activations: np.ndarray          # per muscle, in [0, 1]
    reserves: np.ndarray             # per coordinate
    residuals: np.ndarray            # per coordinate |C a + reserve - tau|
    objective: float
    status: str                      # optimal | infeasible | max_iters
    iterations: int = 0
    degenerate: bool = False
    muscle_names: tuple[str, ...] = ()
    coordinates: tuple[str, ...] = ()

    def activation(self, muscle: str) -> float:
        return float(self.activations[self.muscle_names.index(muscle)])


def _torque_matrix(f_max: np.ndarray, arms: np.ndarray) -> np.ndarray:
    """(n_coords, n_muscles) matrix mapping activations to joint moments."""
    return (arms * f_max[:, None]).T.copy()


def _grad_tol(C: np.ndarray, tau: np.ndarray, p: int, beta: float, resid_target: float) -> float:
    """Inner stopping tolerance on the projected gradient.

    Tight enough that the moment residual implied by the leftover
    gradient stays two decades under ``resid_target``, but never below
    the float64 noise floor of the gradient evaluation itself.
    """
    cmax = float(np.max(np.abs(C))) if C.size else 0.0
    nm = C.shape[1]
    taumax = float(np.max(np.abs(tau))) if tau.size else 0.0
    g_ref = p + beta * cmax * (cmax * nm + taumax)
    noise = 1e-15 * g_ref
    want = 1e-2 * beta * cmax * resid_target
    return max(noise, want, 1e-14)


def _finish(
    C: np.ndarray,
    tau: np.ndarray,
    a: np.ndarray,
    p: int,
    reserve_weight: float,
    tau_scale: float,
    reserves_enabled: bool,
    status: str,
    iterations: int,
) -> ActivationSolution:
    a = np.clip(a, 0.0, 1.0)
    produced = C @ a
    if reserves_enabled:
        reserves = tau - produced
    else:
        reserves = np.zeros_like(tau)
    residuals = np.abs(produced + reserves - tau)
    objective = float(np.sum(a**p) + reserve_weight * np.sum((reserves / tau_scale) ** 2))
    interior = np.sum((a > 1e-6) & (a < 1.0 - 1e-6))
    degenerate = p == 1 and interior > C.shape[0]
    return ActivationSolution(
        activations=a,
        reserves=reserves,
        residuals=residuals,
        objective=objective,
        status=status,
        iterations=iterations,
        degenerate=bool(degenerate),
    )


def solve_activation_qp(
    f_max, arms, tau, params: SolverParams = SolverParams()
) -> ActivationSolution:
    """Matrix-level solve; ``arms`` has one row per muscle, one column per coordinate."""
    f_max = np.asarray(f_max, dtype=np.float64)
    arms = np.asarray(arms, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    if arms.ndim != 2 or arms.shape[0] != f_max.shape[0]:
        raise DimensionError(
            f"moment-arm matrix {arms.shape} does not match {f_max.shape[0]} muscles"
        )
    if tau.shape != (arms.shape[1],):
        raise DimensionError(f"tau {tau.shape} does not match {arms.shape[1]} coordinates")

    C = _torque_matrix(f_max, arms)
    p = int(params.exponent)
    tau_scale = max(1.0, float(np.max(np.abs(tau))) if tau.size else 0.0)
    a0 = np.zeros(C.shape[1])

    if params.reserves_enabled:
        beta = 2.0 * params.reserve_weight / tau_scale**2
        grad_tol = _grad_tol(C, tau, p, beta, 1e-9 * tau_scale)
        a, iters, converged = kernels.solve_box(C, tau, p, beta, a0, params.max_iters, grad_tol)
        status = "optimal" if converged else "max_iters"
        return _finish(C, tau, a, p, params.reserve_weight, tau_scale, True, status, iters)

    return _solve_equality(C, tau, p, params, tau_scale)


def _solve_equality(
    C: np.ndarray, tau: np.ndarray, p: int, params: SolverParams, tau_scale: float
) -> ActivationSolution:
    """Exact moment balance via an augmented-Lagrangian outer loop."""
    tol_vec = params.tolerance * np.maximum(1.0, np.abs(tau))
    cmax = float(np.max(np.abs(C))) if C.size else 1.0
    if cmax == 0.0:
        cmax = 1.0
    rho = 100.0 / cmax**2
    rho_cap = 1e12 / cmax**2
    u = np.zeros_like(tau)
    a = np.zeros(C.shape[1])
    best_a = a
    best_metric = np.inf
    prev_metric = np.inf
    stalled = 0
    total_iters = 0

    for _ in range(200):
        tau_eff = tau - u
        a, iters, converged = kernels.solve_box(
            C, tau_eff, p, rho, a, params.max_iters,
            _grad_tol(C, tau_eff, p, rho, 1e-2 * float(np.min(tol_vec, initial=1.0))),
        )
        total_iters += iters
        resid = C @ a - tau
        metric = float(np.max(np.abs(resid) / tol_vec)) if resid.size else 0.0
        if metric < best_metric:
            best_metric = metric
            best_a = a.copy()
        if metric <= 1.0:
            status = "optimal" if converged else "max_iters"
            return _finish(C, tau, a, p, params.reserve_weight, tau_scale, False, status, total_iters)
        if metric > prev_metric * 0.9999 - 1e-15:
            stalled += 1
        else:
            stalled = 0
        if stalled >= 4 and rho >= rho_cap:
            break
        u = u + resid
        if metric > 0.25 * prev_metric and rho < rho_cap:
            rho *= 10.0
            u /= 10.0
        prev_metric = metric

    if best_metric > 1.0:
        resid = np.abs(C @ best_a - tau)
        worst = int(np.argmax(resid / tol_vec))
        raise InfeasibleError(
            f"no activation in [0,1] balances coordinate index {worst} "
            f"(best residual {resid[worst]:.6g} exceeds tolerance {tol_vec[worst]:.3g})"
        )
    return _finish(
        C, tau, best_a, p, params.reserve_weight, tau_scale, False, "max_iters", total_iters
    )


def solve_static_optimization(
    model: Model,
    posture: Posture,
    tau: GeneralizedForces,
    params: SolverParams = SolverParams(),
) -> ActivationSolution:
    """Model-level solve at one posture; deterministic for identical inputs."""
    if tau.tau.shape != (model.ncoords,):
        raise DimensionError(
            f"tau has {tau.tau.shape[0]} entries, model has {model.ncoords} coordinates"
        )
    arms = moment_arm_matrix(model, posture)
    f_max = model.arrays().f_max
    try:
        solution = solve_activation_qp(f_max, arms, tau.tau, params)
    except InfeasibleError as exc:
        worst = _worst_coordinate_hint(model, f_max, arms, tau.tau)
        raise InfeasibleError(f"{exc} [coordinate {worst}]") from None
    solution.muscle_names = tuple(m.name for m in model.muscles)
    solution.coordinates = model.coordinates
    return solution


def _worst_coordinate_hint(model: Model, f_max, arms, tau) -> str:
    C = _torque_matrix(np.asarray(f_max, float), np.asarray(arms, float))
    capacity_lo = np.minimum(C, 0.0).sum(axis=1)
    capacity_hi = np.maximum(C, 0.0).sum(axis=1)
    gap = np.maximum(tau - capacity_hi, capacity_lo - tau)
    return model.coordinates[int(np.argmax(gap))]


def oracle_feasibility_slack(f_max, arms, tau, grid_step: float) -> np.ndarray:
    """Base per-coordinate residual allowance induced by grid rounding.

    One half-step of the largest single muscle's torque; the oracle
    doubles this allowance only when the grid holds no point inside it.
    """
    C = _torque_matrix(np.asarray(f_max, float), np.asarray(arms, float))
    tau = np.asarray(tau, dtype=np.float64)
    base = 0.5 * grid_step * np.max(np.abs(C), axis=1, initial=0.0)
    return base + 1e-9 * np.maximum(1.0, np.abs(tau))


def brute_force_oracle(
    f_max, arms, tau, p: int = 2, grid_step: float = 0.05
) -> ActivationSolution:
    """Exhaustive grid search over activations; the solver's independent check.

    Enumerates ``{0, grid_step, ..., 1}^n`` in lexicographic order, keeps
    points whose moment residual is within the grid-induced slack, and
    returns the lowest-objective survivor.  The realized residuals of the
    winner are reported so callers can bound what the slack bought it.
    """
    f_max = np.asarray(f_max, dtype=np.float64)
    arms = np.asarray(arms, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    if p not in (1, 2, 3):
        raise ConfigError(f"exponent must be 1, 2 or 3, got {p}")
    if not 0.0 < grid_step <= 0.1:
        raise ConfigError(f"grid_step must be in (0, 0.1], got {grid_step}")
    nm = f_max.shape[0]
    if nm > _ORACLE_MAX_MUSCLES:
        raise OracleTooLargeError(
            f"{nm} muscles exceeds the exhaustive-search limit of {_ORACLE_MAX_MUSCLES}"
        )
    nsteps = int(round(1.0 / grid_step)) + 1
    if nsteps**nm > _ORACLE_MAX_POINTS:
        raise OracleTooLargeError(
            f"{nsteps}^{nm} grid points exceed the {_ORACLE_MAX_POINTS:,} guard"
        )

    C = _torque_matrix(f_max, arms)
    slack = oracle_feasibility_slack(f_max, arms, tau, grid_step)
    found = False
    a = np.zeros(nm)
    obj = float("inf")
    # Doubling up to the sum bound (slack_j * n >= sum_i |C_ji| * step/2)
    # guarantees the rounded continuum optimum is admitted when one
    # exists, without legitimizing genuinely unreachable demands.
    doublings = max(1, int(np.ceil(np.log2(max(nm, 2)))) + 1)
    for _ in range(doublings + 1):
        a, obj, found = kernels.oracle_grid(C, tau, int(p), float(grid_step), slack)
        if found:
            break
        slack = slack * 2.0
    if not found:
        return ActivationSolution(
            activations=np.zeros(nm),
            reserves=np.zeros_like(tau),
            residuals=np.abs(tau),
            objective=float("inf"),
            status="infeasible",
        )
    produced = C @ a
    return ActivationSolution(
        activations=np.asarray(a),
        reserves=np.zeros_like(tau),
        residuals=np.abs(produced - tau),
        objective=float(obj),
        status="optimal",
    )


def equality_multipliers(f_max, arms, a: np.ndarray, p: int) -> np.ndarray:
    """Least-squares KKT multipliers of the equality constraints at ``a``.

    Used by the verification suite to bound how much objective the grid
    oracle can gain from its feasibility slack.
    """
    C = _torque_matrix(np.asarray(f_max, float), np.asarray(arms, float))
    free = (a > 1e-9) & (a < 1.0 - 1e-9)
    if not np.any(free):
        return np.zeros(C.shape[0])
    grad = p * a[free] ** (p - 1)
    lam, *_ = np.linalg.lstsq(C[:, free].T, grad, rcond=None)
    return lam
