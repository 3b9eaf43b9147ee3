"""Dynamics of the normalized state and state-dependent conservation tests.

When H is not Hermitian the Schroedinger solution psi(t) = exp(-iHt) psi0
changes norm, so mean values are taken on the normalized state
psi_hat(t) = psi(t) / |psi(t)|. That state solves a nonlinear equation

    i d/dt psi_hat = H_nl(t) psi_hat,
    H_nl(t) = H + (1/2) <psi_hat, (H^† - H) psi_hat> * 1,

whose generator on observables is the state-dependent derivation

    delta_psi_hat(X; psi_hat) = delta_gamma(X) - i X <psi_hat, (H^† - H) psi_hat>.

Three nested notions of conservation are measured here, each as a
residual over one trajectory:

* gamma-symmetry:      delta_gamma(X) = 0         (state-independent)
* psi_hat-integral:    delta_psi_hat(X; t) = 0    (operator level)
* weak psi_hat-integral: <psi_hat, delta_psi_hat(X; t) psi_hat> = 0
                         (mean values only)

The identity operator is the canonical separator: it is always a weak
integral but an operator-level integral only for Hermitian H.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CertificationError, ConfigError, DimensionError, InstabilityError
from .gamma import delta_gamma, gamma_context
from .linalg import as_square_matrix, as_state_vector, expm, op_norm

DEFAULT_TOL_CLASS = 1e-8
DEFAULT_GRID_POINTS = 201
UNIT_NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateTrajectory:
    """Time grid with raw states, normalized states and squared norms.

    ``psi`` and ``psi_hat`` have one state per row; ``norm_sq[j]`` equals
    ``|psi[j]|^2`` and ``psi_hat[j] = psi[j] / |psi[j]|`` to 1e-12.
    """

    t_grid: np.ndarray
    psi: np.ndarray
    psi_hat: np.ndarray
    norm_sq: np.ndarray

    @property
    def dim(self) -> int:
        return self.psi.shape[1]


def _unit_vector(v, dim: int | None, tol: float, name: str) -> np.ndarray:
    w = as_state_vector(v, dim, name)
    nrm = np.linalg.norm(w)
    if abs(nrm - 1.0) > tol:
        raise ConfigError(f"{name} must be normalized, |{name}| = {nrm:.12g}")
    return w


def _trajectory_from_states(t: np.ndarray, states: np.ndarray) -> StateTrajectory:
    norms = np.linalg.norm(states, axis=1)
    if np.any(norms == 0.0):
        raise InstabilityError("state norm vanished along the trajectory")
    return StateTrajectory(
        t_grid=t,
        psi=states,
        psi_hat=states / norms[:, None],
        norm_sq=norms**2,
    )


def exact_trajectory(h, psi0, t_grid) -> StateTrajectory:
    """Propagate a normalized state with the matrix exponential.

    ``psi[j] = expm(-i H t_j) psi0``; each grid point is evaluated
    independently, so accuracy does not accumulate along the grid.
    """
    hm = as_square_matrix(h, "hamiltonian")
    v0 = _unit_vector(psi0, hm.shape[0], 1e-12, "psi0")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size == 0:
        raise ConfigError("t_grid is empty")
    states = np.empty((t.size, hm.shape[0]), dtype=complex)
    for j, tj in enumerate(t):
        states[j] = expm(-1j * hm * tj) @ v0
    return _trajectory_from_states(t, states)


def nonhermiticity_scalar(h, psi_hat) -> complex:
    """The quadratic form <psi_hat, (H^† - H) psi_hat> (purely imaginary)."""
    hm = as_square_matrix(h, "hamiltonian")
    v = as_state_vector(psi_hat, hm.shape[0], "psi_hat")
    return complex(np.vdot(v, (hm.conj().T - hm) @ v))


def h_nl(h, psi_hat) -> np.ndarray:
    """State-dependent Hamiltonian of the normalized flow.

    H_nl = H + (1/2) <psi_hat, (H^† - H) psi_hat> * 1. The scalar term is
    purely imaginary, so H_nl + H_nl^† = H + H^† independently of the
    state.
    """
    hm = as_square_matrix(h, "hamiltonian")
    v = _unit_vector(psi_hat, hm.shape[0], UNIT_NORM_TOL, "psi_hat")
    scalar = nonhermiticity_scalar(hm, v)
    return hm + 0.5 * scalar * np.eye(hm.shape[0], dtype=complex)


def integrate_nonlinear(
    h, psi_hat0, t_grid, substeps: int = 1
) -> tuple[StateTrajectory, float]:
    """Integrate the nonlinear equation with the classical 4th-order stepper.

    The nonlinear scalar is re-evaluated at every stage. The normalized
    state is never re-normalized mid-run, so norm drift stays visible as
    an integrator diagnostic. Returns the trajectory and
    ``max_deviation``, the worst distance to the matrix-exponential
    reference; a deviation above 0.1 raises ``InstabilityError``.
    """
    hm = as_square_matrix(h, "hamiltonian")
    v0 = _unit_vector(psi_hat0, hm.shape[0], 1e-12, "psi_hat0")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size < 2:
        raise ConfigError("t_grid needs at least two points")
    steps = np.diff(t)
    if np.max(np.abs(steps - steps[0])) > 1e-12 * max(abs(steps[0]), 1.0):
        raise ConfigError("t_grid must be uniform")
    if substeps < 1:
        raise ConfigError("substeps must be >= 1")

    hd = hm.conj().T
    anti = hd - hm

    def rhs(v: np.ndarray) -> np.ndarray:
        scalar = complex(np.vdot(v, anti @ v))
        return -1j * (hm @ v + 0.5 * scalar * v)

    dt = steps[0] / substeps
    states = np.empty((t.size, hm.shape[0]), dtype=complex)
    states[0] = v0
    v = v0.copy()
    for j in range(1, t.size):
        for _ in range(substeps):
            k1 = rhs(v)
            k2 = rhs(v + 0.5 * dt * k1)
            k3 = rhs(v + 0.5 * dt * k2)
            k4 = rhs(v + dt * k3)
            v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[j] = v

    reference = exact_trajectory(hm, v0, t)
    deviation = float(
        np.max(np.linalg.norm(states - reference.psi_hat, axis=1))
    )
    if deviation > 0.1:
        raise InstabilityError(
            f"nonlinear integration deviates by {deviation:.3g}; "
            f"increase substeps (current {substeps})"
        )
    return _trajectory_from_states(t, states), deviation


def mean_value(x, psi_hat) -> complex:
    """Quadratic form <psi_hat, X psi_hat>."""
    xm = as_square_matrix(x, "observable")
    v = as_state_vector(psi_hat, xm.shape[0], "psi_hat")
    return complex(np.vdot(v, xm @ v))


def delta_psi_hat(h, x, psi_hat) -> np.ndarray:
    """State-dependent derivation delta_gamma(X) - i X <psi_hat,(H^†-H)psi_hat>.

    Algebraically equal to i (H_nl^† X - X H_nl); its operator norm is
    bounded by 4 |H| |X|.
    """
    hm = as_square_matrix(h, "hamiltonian")
    xm = as_square_matrix(x, "observable")
    if xm.shape != hm.shape:
        raise DimensionError("observable and Hamiltonian dims differ")
    v = _unit_vector(psi_hat, hm.shape[0], UNIT_NORM_TOL, "psi_hat")
    scalar = nonhermiticity_scalar(hm, v)
    return 1j * (hm.conj().T @ xm - xm @ hm) - 1j * scalar * xm


def mean_derivative(h, x, psi_hat) -> complex:
    """Time derivative of <psi_hat, X psi_hat> expressed through the derivation."""
    v = as_state_vector(psi_hat)
    return complex(np.vdot(v, delta_psi_hat(h, x, v) @ v))


@dataclass(frozen=True)
class ClassificationReport:
    """Residual-based membership of one observable in the three classes.

    Residuals are operator 2-norms (moduli for the weak class) taken as
    suprema over the trajectory grid; verdicts threshold them at
    ``tol_class``. An operator-level integral is automatically a weak
    one, so ``in_c_psi_hat`` implies ``in_c_psi_hat_weak``.
    """

    observable_name: str
    c_gamma_residual: float
    c_psi_hat_residual: float
    c_psi_hat_weak_residual: float
    in_c_gamma: bool
    in_c_psi_hat: bool
    in_c_psi_hat_weak: bool
    tol_class: float


def classify(
    h,
    x,
    trajectory: StateTrajectory,
    tol_class: float = DEFAULT_TOL_CLASS,
    name: str = "X",
) -> ClassificationReport:
    """Classify one observable against one trajectory."""
    hm = as_square_matrix(h, "hamiltonian")
    xm = as_square_matrix(x, "observable")
    ctx = gamma_context(hm)
    gamma_res = op_norm(delta_gamma(ctx, xm))

    strong = 0.0
    weak = 0.0
    for v in trajectory.psi_hat:
        d = delta_psi_hat(hm, xm, v)
        strong = max(strong, op_norm(d))
        weak = max(weak, abs(complex(np.vdot(v, d @ v))))

    return ClassificationReport(
        observable_name=name,
        c_gamma_residual=float(gamma_res),
        c_psi_hat_residual=float(strong),
        c_psi_hat_weak_residual=float(weak),
        in_c_gamma=bool(gamma_res <= tol_class),
        in_c_psi_hat=bool(strong <= tol_class),
        in_c_psi_hat_weak=bool(weak <= tol_class),
        tol_class=tol_class,
    )


def classify_ensemble(
    h,
    x,
    t_grid,
    n_states: int,
    rng: np.random.Generator,
    tol_class: float = DEFAULT_TOL_CLASS,
    name: str = "X",
) -> ClassificationReport:
    """Worst-case classification over an ensemble of random initial states.

    Membership in the state-dependent classes is relative to a
    trajectory; this re-tests over ``n_states`` Haar-like random unit
    vectors and keeps the largest residuals.
    """
    hm = as_square_matrix(h, "hamiltonian")
    if n_states < 1:
        raise ConfigError("n_states must be >= 1")
    worst: ClassificationReport | None = None
    for _ in range(n_states):
        v0 = rng.normal(size=hm.shape[0]) + 1j * rng.normal(size=hm.shape[0])
        v0 /= np.linalg.norm(v0)
        report = classify(hm, x, exact_trajectory(hm, v0, t_grid), tol_class, name)
        if worst is None:
            worst = report
        else:
            worst = ClassificationReport(
                observable_name=name,
                c_gamma_residual=max(worst.c_gamma_residual, report.c_gamma_residual),
                c_psi_hat_residual=max(
                    worst.c_psi_hat_residual, report.c_psi_hat_residual
                ),
                c_psi_hat_weak_residual=max(
                    worst.c_psi_hat_weak_residual, report.c_psi_hat_weak_residual
                ),
                in_c_gamma=worst.in_c_gamma and report.in_c_gamma,
                in_c_psi_hat=worst.in_c_psi_hat and report.in_c_psi_hat,
                in_c_psi_hat_weak=worst.in_c_psi_hat_weak
                and report.in_c_psi_hat_weak,
                tol_class=tol_class,
            )
    assert worst is not None
    return worst


def gamma_symmetry_decay_check(
    h, x, trajectory: StateTrajectory, cert_tol: float = 1e-9
) -> float:
    """Check the decay law x(t) = x(0) / |psi(t)|^2 for a gamma-symmetry.

    The mean value of a symmetry on the normalized trajectory is fully
    determined by the initial mean and the norm history. Requires the
    trajectory to start normalized and ``x`` to be certified as a
    symmetry; otherwise raises ``CertificationError``.
    """
    hm = as_square_matrix(h, "hamiltonian")
    xm = as_square_matrix(x, "observable")
    ctx = gamma_context(hm)
    residual = op_norm(delta_gamma(ctx, xm))
    bound = cert_tol * max(1.0, ctx.h_norm * op_norm(xm))
    if residual > bound:
        raise CertificationError(
            f"observable is not a gamma-symmetry: |delta_gamma(X)| = "
            f"{residual:.3e} > {bound:.3e}"
        )
    if abs(trajectory.norm_sq[0] - 1.0) > 1e-10:
        raise ConfigError("trajectory must be normalized at its first grid point")

    means = np.einsum(
        "ij,jk,ik->i", trajectory.psi_hat.conj(), xm, trajectory.psi_hat
    )
    predicted = means[0] / trajectory.norm_sq * trajectory.norm_sq[0]
    return float(np.max(np.abs(means - predicted)))


class NecessaryConditionResult(NamedTuple):
    """Mismatch of the weak-integral identity on the un-normalized states."""

    max_residual: float
    premise_residual: float
    premise_ok: bool


def necessary_condition_residual(
    h,
    x,
    trajectory: StateTrajectory,
    x0: complex,
    tol_class: float = DEFAULT_TOL_CLASS,
) -> NecessaryConditionResult:
    """Test <psi, delta_gamma(X) psi> = i x0 <psi, (H^† - H) psi> on the grid.

    Both sides use the un-normalized states. The identity is necessary
    for X to be a weak integral with constant mean ``x0``; the premise is
    re-verified and reported rather than assumed.
    """
    hm = as_square_matrix(h, "hamiltonian")
    xm = as_square_matrix(x, "observable")
    ctx = gamma_context(hm)
    dg = delta_gamma(ctx, xm)
    anti = hm.conj().T - hm

    premise = classify(hm, xm, trajectory, tol_class).c_psi_hat_weak_residual
    lhs = np.einsum("ij,jk,ik->i", trajectory.psi.conj(), dg, trajectory.psi)
    rhs = 1j * x0 * np.einsum(
        "ij,jk,ik->i", trajectory.psi.conj(), anti, trajectory.psi
    )
    return NecessaryConditionResult(
        max_residual=float(np.max(np.abs(lhs - rhs))),
        premise_residual=float(premise),
        premise_ok=bool(premise <= tol_class),
    )
