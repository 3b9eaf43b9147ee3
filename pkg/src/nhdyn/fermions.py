"""Three-mode fermionic model with a nilpotent transfer Hamiltonian.

Mode operators b_j are realized as Jordan-Wigner matrices on C^(2^n),
satisfying the canonical anticommutation relations

    {b_k, b_j^†} = delta_kj * 1,     b_j^2 = 0.

The occupation basis vector phi_{ijk} = (b_1^†)^i (b_2^†)^j (b_3^†)^k
phi_000 sits in column 4i + 2j + k (zero-based), with phi_000 = e_1;
with this application order all Jordan-Wigner signs are +1.

The model Hamiltonian H = b_1^† (lambda b_2 + mu b_3) transfers
occupation from modes 2 and 3 into mode 1. It squares to zero, so the
propagator is exactly linear in time, U(t) = 1 - iHt, and the two
initial conditions phi_011 and phi_010 admit closed-form occupation
numbers n_j(t) = <psi_hat, N_j psi_hat>:

    phi_011:  n1 = (l^2+m^2) t^2 / D,  n2 = (1 + m^2 t^2) / D,
              n3 = (1 + l^2 t^2) / D,  D = 1 + (l^2+m^2) t^2
    phi_010:  n1 = l^2 t^2 / d,  n2 = 1 / d,  n3 = 0,  d = 1 + l^2 t^2

so n1+n2+n3 is conserved (2 and 1 respectively) even though neither
initial state is an eigenvector of H. The nonlinear scalar on these
trajectories is -2it (l^2+m^2)/D and -2it l^2/d; the first is the time
derivative of log D required by dD/dt = i <psi,(H^†-H)psi>, which pins
the sign and the sum of squares in the numerator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .flow import StateTrajectory, exact_trajectory, nonhermiticity_scalar
from .gamma import delta_gamma, gamma_context
from .linalg import frob

MAX_MODES = 10


@dataclass(frozen=True)
class CarAlgebra:
    """Jordan-Wigner realization of n fermionic modes on C^(2^n)."""

    n_modes: int
    dim: int
    lowering: tuple[np.ndarray, ...]
    number_ops: tuple[np.ndarray, ...]
    basis_labels: dict[tuple[int, ...], int]

    def raising(self, j: int) -> np.ndarray:
        """Creation operator for mode j (1-based)."""
        return self.lowering[j - 1].conj().T

    def basis_state(self, label) -> np.ndarray:
        """Unit occupation-basis vector for a label like "011" or (0,1,1)."""
        occ = parse_occupation_label(label, self.n_modes)
        v = np.zeros(self.dim, dtype=complex)
        v[self.basis_labels[occ]] = 1.0
        return v


def parse_occupation_label(label, n_modes: int) -> tuple[int, ...]:
    if isinstance(label, str):
        bits = label.strip()
        if len(bits) != n_modes or any(c not in "01" for c in bits):
            raise ConfigError(
                f"occupation label must be {n_modes} characters of 0/1, "
                f"got {label!r}"
            )
        return tuple(int(c) for c in bits)
    occ = tuple(int(b) for b in label)
    if len(occ) != n_modes or any(b not in (0, 1) for b in occ):
        raise ConfigError(f"occupation label {label!r} is not valid")
    return occ


def build_car(n_modes: int) -> CarAlgebra:
    """Construct the mode matrices with the standard sign-string convention."""
    if not 1 <= n_modes <= MAX_MODES:
        raise ConfigError(f"n_modes must lie in [1, {MAX_MODES}], got {n_modes}")
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    low = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    eye2 = np.eye(2, dtype=complex)

    lowering = []
    for j in range(n_modes):
        factors = [sz] * j + [low] + [eye2] * (n_modes - j - 1)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        lowering.append(m)

    number_ops = tuple(b.conj().T @ b for b in lowering)
    dim = 2**n_modes
    labels = {}
    for idx in range(dim):
        occ = tuple((idx >> (n_modes - 1 - j)) & 1 for j in range(n_modes))
        labels[occ] = idx
    return CarAlgebra(
        n_modes=n_modes,
        dim=dim,
        lowering=tuple(lowering),
        number_ops=number_ops,
        basis_labels=labels,
    )


@dataclass(frozen=True)
class DmModel:
    """The two-parameter transfer model on three modes."""

    algebra: CarAlgebra
    lam: float
    mu: float
    h: np.ndarray

    @property
    def number_total(self) -> np.ndarray:
        return sum(self.algebra.number_ops)


def build_dm_model(lam: float, mu: float, allow_zero: bool = False) -> DmModel:
    """Assemble H = b_1^† (lam b_2 + mu b_3) on the 8-dimensional space.

    The couplings are strictly positive; zero is admitted only for
    trivial checks via ``allow_zero``.
    """
    if allow_zero:
        if lam < 0 or mu < 0:
            raise ConfigError(f"couplings must be >= 0, got lam={lam}, mu={mu}")
    elif lam <= 0 or mu <= 0:
        raise ConfigError(f"couplings must be positive, got lam={lam}, mu={mu}")
    algebra = build_car(3)
    b1, b2, b3 = algebra.lowering
    h = b1.conj().T @ (lam * b2 + mu * b3)
    return DmModel(algebra=algebra, lam=lam, mu=mu, h=h)


_CLOSED_FORM_LABELS = {(0, 1, 1), (0, 1, 0)}


def closed_form_occupations(model: DmModel, initial, t):
    """Closed-form (n1, n2, n3) for the two analytically solved initial states.

    ``t`` may be a scalar or an array. Unsupported labels raise
    ``ConfigError``; the simulator covers them numerically instead.
    """
    occ = parse_occupation_label(initial, 3)
    if occ not in _CLOSED_FORM_LABELS:
        raise ConfigError(
            f"no closed form for initial state {occ}; use simulate_occupations"
        )
    tt = np.asarray(t, dtype=float)
    l2, m2 = model.lam**2, model.mu**2
    if occ == (0, 1, 1):
        den = 1.0 + (l2 + m2) * tt**2
        return (l2 + m2) * tt**2 / den, (1.0 + m2 * tt**2) / den, (1.0 + l2 * tt**2) / den
    den = 1.0 + l2 * tt**2
    return l2 * tt**2 / den, 1.0 / den, np.zeros_like(tt)


def closed_form_scalar(model: DmModel, initial, t):
    """Closed-form nonlinear scalar <psi_hat,(H^†-H)psi_hat> on the two
    solved trajectories (purely imaginary; see the module docstring for
    why the numerator carries the sum of squared couplings)."""
    occ = parse_occupation_label(initial, 3)
    if occ not in _CLOSED_FORM_LABELS:
        raise ConfigError(f"no closed form for initial state {occ}")
    tt = np.asarray(t, dtype=float)
    l2, m2 = model.lam**2, model.mu**2
    if occ == (0, 1, 1):
        return -2j * tt * (l2 + m2) / (1.0 + (l2 + m2) * tt**2)
    return -2j * tt * l2 / (1.0 + l2 * tt**2)


@dataclass(frozen=True)
class OccupationTrajectory:
    """Occupation numbers, their sum and the nonlinear scalar on a grid."""

    t_grid: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray
    total: np.ndarray
    scalar: np.ndarray
    states: StateTrajectory


def simulate_occupations(model: DmModel, initial, t_grid) -> OccupationTrajectory:
    """Numerical occupation numbers via the matrix-exponential trajectory.

    Works for any occupation-basis initial label; for the two closed-form
    cases it agrees with ``closed_form_occupations`` to ~1e-11. The
    propagator is also exactly 1 - iHt here (H is nilpotent), which the
    test-suite uses as an independent oracle.
    """
    psi0 = model.algebra.basis_state(initial)
    states = exact_trajectory(model.h, psi0, t_grid)
    ns = []
    for nj in model.algebra.number_ops:
        ns.append(
            np.einsum("ij,jk,ik->i", states.psi_hat.conj(), nj, states.psi_hat).real
        )
    scalar = np.array(
        [nonhermiticity_scalar(model.h, v) for v in states.psi_hat], dtype=complex
    )
    return OccupationTrajectory(
        t_grid=states.t_grid,
        n1=ns[0],
        n2=ns[1],
        n3=ns[2],
        total=ns[0] + ns[1] + ns[2],
        scalar=scalar,
        states=states,
    )


def delta_gamma_number_check(model: DmModel) -> float:
    """Residual of the closed-form derivation of the total number operator.

    delta_gamma(N) factors through the mode-exchange blocks:

        i lam (b2^† b1 - b1^† b2)(1 + N3) + i mu (b3^† b1 - b1^† b3)(1 + N2)

    and the Frobenius mismatch against the generic derivation stays at
    roundoff (<= 1e-12) for any couplings.
    """
    alg = model.algebra
    b1, b2, b3 = alg.lowering
    n2, n3 = alg.number_ops[1], alg.number_ops[2]
    eye = np.eye(alg.dim, dtype=complex)

    rhs = 1j * model.lam * (b2.conj().T @ b1 - b1.conj().T @ b2) @ (eye + n3)
    rhs += 1j * model.mu * (b3.conj().T @ b1 - b1.conj().T @ b3) @ (eye + n2)

    lhs = delta_gamma(gamma_context(model.h), model.number_total)
    return frob(lhs - rhs)


def scalar_term_check(model: DmModel, initial, t_grid) -> float:
    """Max mismatch between the simulated nonlinear scalar and its closed form."""
    occ = parse_occupation_label(initial, 3)
    if occ not in _CLOSED_FORM_LABELS:
        raise ConfigError(f"no closed form for initial state {occ}")
    run = simulate_occupations(model, occ, t_grid)
    reference = closed_form_scalar(model, occ, run.t_grid)
    return float(np.max(np.abs(run.scalar - reference)))
