"""
Biorthogonal eigensystems and metric operators
==============================================

A non-Hermitian Hamiltonian with distinct real eigenvalues has two
eigenvector families: phi_k for H and psi_k for the adjoint. Matched and
rescaled, they are mutually biorthogonal, and their rank-one sums S_phi
and S_psi are positive, mutually inverse, and intertwine H with H^†.
"""

import numpy as np

from nhdyn import build_biorthogonal, verify_intertwining
from nhdyn.ensembles import random_hamiltonian

np.set_printoptions(precision=4, suppress=True)

# a small triangular example that can be checked by hand
h = np.array([[1.0, 1.0], [0.0, 2.0]])
system = build_biorthogonal(h)

print("eigenvalues:", system.eigenvalues.real)
print("phi columns:\n", system.phi)
print("psi columns (scaled so <phi_k, psi_l> = delta):\n", system.psi)
print("Gram matrix phi^† psi:\n", system.phi.conj().T @ system.psi)

print("\nmetric operators")
print("S_phi:\n", system.s_phi)
print("S_psi:\n", system.s_psi)
print("S_phi S_psi - 1 max entry:", np.abs(system.s_phi @ system.s_psi - np.eye(2)).max())

r_psi, r_phi = verify_intertwining(system, h)
print(f"intertwining residuals: S_psi H = H^† S_psi -> {r_psi:.2e}, "
      f"S_phi H^† = H S_phi -> {r_phi:.2e}")

# the same machinery on a random 6-dimensional real-spectrum Hamiltonian
rng = np.random.default_rng(0)
h6 = random_hamiltonian(6, rng, kind="real_spectrum")
system6 = build_biorthogonal(h6)
print("\nrandom 6x6: eigenbasis condition", f"{system6.condition_estimate:.2f},",
      "biorthogonality residual", f"{system6.biortho_residual:.2e}")

# expansion of an arbitrary vector in either family
f = rng.normal(size=6) + 1j * rng.normal(size=6)
reconstructed = system6.psi @ (system6.phi.conj().T @ f)
print("completeness residual for a random vector:",
      f"{np.linalg.norm(reconstructed - f) / np.linalg.norm(f):.2e}")
