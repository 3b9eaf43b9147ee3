"""
The normalized flow and three grades of conservation
====================================================

With H non-Hermitian the raw state changes norm, so physical mean values
live on psi_hat(t) = psi(t)/|psi(t)|, which obeys a nonlinear equation
with the state-dependent Hamiltonian H_nl. An observable can be
conserved at three strictness levels: as a gamma-symmetry (operator
fixed, state-independent), as an operator annihilated by the
state-dependent derivation, or weakly (its mean on the trajectory is
constant). The identity operator separates the last two: it is always a
weak integral, never an operator-level one unless H is Hermitian.
"""

import numpy as np

from nhdyn import (
    classify,
    exact_trajectory,
    gamma_symmetry_decay_check,
    h_nl,
    integrate_nonlinear,
    mean_value,
)
from nhdyn.ensembles import random_hamiltonian, random_unit_vector

np.set_printoptions(precision=5, suppress=True)
rng = np.random.default_rng(3)

h = random_hamiltonian(4, rng, kind="real_spectrum")
psi0 = random_unit_vector(4, rng)
t = np.linspace(0.0, 4.0, 81)
traj = exact_trajectory(h, psi0, t)
print("norm^2 range along the trajectory:",
      f"[{traj.norm_sq.min():.4f}, {traj.norm_sq.max():.4f}]")

# the nonlinear Hamiltonian keeps H + H^† fixed while trading an
# imaginary scalar in time
hnl0 = h_nl(h, traj.psi_hat[0])
hnl1 = h_nl(h, traj.psi_hat[-1])
print("scalar shift at t=0 vs t=4:",
      (hnl0 - h)[0, 0], "vs", (hnl1 - h)[0, 0])

# classify the identity: weakly conserved, not at operator level
report = classify(h, np.eye(4), traj, name="identity")
print("\nidentity operator:")
print(f"  gamma residual        {report.c_gamma_residual:.3e} -> in C_gamma: {report.in_c_gamma}")
print(f"  operator residual     {report.c_psi_hat_residual:.3e} -> integral: {report.in_c_psi_hat}")
print(f"  weak (mean) residual  {report.c_psi_hat_weak_residual:.3e} -> weak integral: {report.in_c_psi_hat_weak}")

# a gamma-symmetry is generally NOT weakly conserved: its mean decays
# with the squared norm, x(t) = x(0) / |psi(t)|^2
h2 = np.array([[0.0, 1.0], [0.0, 0.0]])
x = np.array([[0.0, 0.0], [0.0, 1.0]])
traj2 = exact_trajectory(h2, np.array([0.0, 1.0]), t)
err = gamma_symmetry_decay_check(h2, x, traj2)
print(f"\ndecay law residual for a nilpotent-block symmetry: {err:.2e}")
print("mean at t=0 and t=4:",
      mean_value(x, traj2.psi_hat[0]).real, mean_value(x, traj2.psi_hat[-1]).real)

# the nonlinear integrator reproduces the normalized exponential route
# at fourth order in the step size
_, dev = integrate_nonlinear(h, psi0, t)
print(f"\nRK4 deviation from the matrix-exponential route: {dev:.2e}")
