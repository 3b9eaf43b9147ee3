"""Heisenberg-like dynamics generated by a non-self-adjoint Hamiltonian.

The central map is the conjugation

    gamma_t(X) = exp(i H^† t) X exp(-i H t)

which reduces to the ordinary Heisenberg picture when H is Hermitian,
and its generator, the gamma-derivation

    delta_gamma(X) = i (H^† X - X H).

Operators fixed by the dynamics (equivalently annihilated by the
derivation, equivalently satisfying the intertwining relation
H^† X = X H) are gamma-symmetries; they form a linear space that this
module extracts as the kernel of the vectorized intertwining operator.
When H is not Hermitian the identity operator is not fixed, so gamma_t
fails to be multiplicative; the norm of an evolving state tracks exactly
that failure through I(t) = |exp(-iHt) psi0|^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    ConfigError,
    DimensionError,
    NumericalError,
    TruncationError,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    as_square_matrix,
    as_state_vector,
    expm,
    frob,
    kron,
    nullspace,
    op_norm,
    unvec,
    vec,
)

MAX_SERIES_TERMS = 500


@dataclass(frozen=True)
class GammaContext:
    """A Hamiltonian together with its cached operator norm."""

    h: np.ndarray
    h_norm: float
    dim: int


def gamma_context(h) -> GammaContext:
    hm = as_square_matrix(h, "hamiltonian")
    return GammaContext(h=hm, h_norm=op_norm(hm), dim=hm.shape[0])


def _check_dim(ctx: GammaContext, x, name: str = "observable") -> np.ndarray:
    xm = as_square_matrix(x, name)
    if xm.shape[0] != ctx.dim:
        raise DimensionError(
            f"{name} has dim {xm.shape[0]}, Hamiltonian has dim {ctx.dim}"
        )
    return xm


def gamma_t(ctx: GammaContext, x, t: float) -> np.ndarray:
    """Evolve an observable: exp(i H^† t) X exp(-i H t)."""
    xm = _check_dim(ctx, x)
    left = expm(1j * ctx.h.conj().T * t)
    right = expm(-1j * ctx.h * t)
    return left @ xm @ right


def delta_gamma(ctx: GammaContext, x) -> np.ndarray:
    """Generator of the dynamics: i (H^† X - X H)."""
    xm = _check_dim(ctx, x)
    return 1j * (ctx.h.conj().T @ xm - xm @ ctx.h)


def gamma_series(
    ctx: GammaContext,
    x,
    t: float,
    tol_trunc: float = 1e-12,
    max_terms: int = MAX_SERIES_TERMS,
) -> tuple[np.ndarray, int]:
    """Evaluate the exponential series sum_k t^k delta^k(X) / k!.

    The truncation order is fixed a priori from the growth bound
    |delta^k(X)| <= (2|H|)^k |X|, so the discarded tail is certified to
    be smaller than ``tol_trunc``. Returns the partial sum and the
    number of terms used.
    """
    xm = _check_dim(ctx, x)
    if tol_trunc <= 0:
        raise ConfigError("tol_trunc must be positive")
    x_scale = max(op_norm(xm), np.finfo(float).tiny)
    rate = 2.0 * ctx.h_norm * abs(t)

    terms = _certified_terms(rate, tol_trunc / x_scale, max_terms)

    total = xm.copy()
    term = xm
    for k in range(1, terms):
        term = (t / k) * delta_gamma(ctx, term)
        total += term
    return total, terms


def _certified_terms(rate: float, rel_tol: float, max_terms: int) -> int:
    """Smallest K with sum_{k>=K} rate^k / k! below ``rel_tol``.

    Uses the geometric tail bound term_K / (1 - rate/(K+1)) once the
    ratio rate/(K+1) drops below 1.
    """
    term = 1.0  # rate^K / K! at K = 0
    for count in range(1, max_terms + 1):
        k = count - 1  # index of the last included term
        ratio = rate / (k + 1)
        if ratio < 1.0 and term * ratio / (1.0 - ratio) < rel_tol:
            return count
        term *= ratio
        if term == 0.0:
            return count
    raise TruncationError(
        f"series needs more than {max_terms} terms for rate {rate:.3e} "
        f"and tolerance {rel_tol:.1e}"
    )


def identity_norm_evolution(ctx: GammaContext, psi0, t_grid) -> np.ndarray:
    """Squared-norm history of an evolving state, with a derivative check.

    Returns an array with rows ``(t, I(t), residual)`` where
    I(t) = |exp(-iHt) psi0|^2 and the residual compares the second-order
    finite-difference derivative of I against the identity
    dI/dt = i <psi(t), (H^† - H) psi(t)>; it shrinks as O(dt^2).
    """
    v0 = as_state_vector(psi0, ctx.dim, "psi0")
    if np.linalg.norm(v0) == 0.0:
        raise ConfigError("psi0 must be nonzero")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size == 0:
        raise ConfigError("t_grid is empty")

    anti = ctx.h.conj().T - ctx.h
    states = np.empty((t.size, ctx.dim), dtype=complex)
    for j, tj in enumerate(t):
        states[j] = expm(-1j * ctx.h * tj) @ v0
    norms = np.einsum("ij,ij->i", states.conj(), states).real
    exact_rate = (1j * np.einsum("ij,jk,ik->i", states.conj(), anti, states)).real

    if t.size >= 3:
        fd_rate = np.gradient(norms, t, edge_order=2)
    elif t.size == 2:
        fd_rate = np.gradient(norms, t)
    else:
        fd_rate = exact_rate.copy()
    return np.column_stack([t, norms, np.abs(fd_rate - exact_rate)])


@dataclass(frozen=True)
class SymmetryBasis:
    """Frobenius-orthonormal basis of the gamma-symmetries of H.

    ``residuals`` holds |H^† X - X H|_F per generator and
    ``chain_closure_dim`` the dimension of span{X H^k, k = 0..N-1} for
    the first generator (powers beyond N-1 add nothing by
    Hamilton-Cayley).
    """

    generators: list[np.ndarray]
    residuals: list[float]
    chain_closure_dim: int


def gamma_symmetry_basis(
    ctx: GammaContext, rank_tol_rel: float = DEFAULT_RANK_TOL
) -> SymmetryBasis:
    """All solutions of the intertwining relation H^† X = X H.

    The relation is vectorized column-wise as
    (I kron H^† - H^T kron I) vec(X) = 0 and the kernel extracted by
    SVD; kernel vectors are Frobenius-orthonormal by construction. An
    empty basis is a valid result.
    """
    n = ctx.dim
    eye = np.eye(n, dtype=complex)
    sylvester = kron(eye, ctx.h.conj().T) - kron(ctx.h.T, eye)
    kernel = nullspace(sylvester, rank_tol_rel)

    generators = [unvec(kernel[:, k], n, n) for k in range(kernel.shape[1])]
    residuals = [
        frob(ctx.h.conj().T @ g - g @ ctx.h) for g in generators
    ]

    chain_dim = 0
    if generators:
        chain = []
        power = eye
        for _ in range(n):
            chain.append(vec(generators[0] @ power))
            power = power @ ctx.h
        stack = np.array(chain)
        sigma = np.linalg.svd(stack, compute_uv=False)
        chain_dim = int((sigma > rank_tol_rel * max(sigma[0], 1e-300)).sum())

    return SymmetryBasis(
        generators=generators, residuals=residuals, chain_closure_dim=chain_dim
    )


class SimilarHamiltonian(NamedTuple):
    """Result of conjugating a Hermitian seed by an invertible map."""

    h: np.ndarray
    commutator_residual: float
    r_condition: float


def similar_norm_preserving(h0, r, herm_tol: float = 1e-12) -> SimilarHamiltonian:
    """Build H = R H0 R^{-1} from Hermitian H0 and report |[H0, R^† R]|.

    When the commutator vanishes the evolution exp(-iHt) preserves every
    norm: exp(i H^† t) exp(-i H t) = 1. A nonzero commutator is the
    negative control, with state norms genuinely varying in time.
    """
    h0m = as_square_matrix(h0, "h0")
    rm = as_square_matrix(r, "r")
    if rm.shape != h0m.shape:
        raise DimensionError("h0 and r must have matching shapes")
    herm_defect = frob(h0m - h0m.conj().T)
    if herm_defect > herm_tol * max(1.0, frob(h0m)):
        raise ConfigError(
            f"h0 is not Hermitian: |H0 - H0^†|_F = {herm_defect:.3e}"
        )
    cond = float(np.linalg.cond(rm))
    if not np.isfinite(cond) or cond > 1e14:
        raise NumericalError(f"r is numerically singular (condition {cond:.3e})")

    gram = rm.conj().T @ rm
    commutator = frob(h0m @ gram - gram @ h0m)
    h = rm @ h0m @ np.linalg.inv(rm)
    return SimilarHamiltonian(h=h, commutator_residual=commutator, r_condition=cond)
