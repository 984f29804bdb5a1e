"""
Truncated Fock space
====================

Ladder operators, coherent states and the reservoir bookkeeping of a single
matter-wave mode.
"""

import numpy as np

from mwx import quantum as q

a, ad = q.ladder_matrices(5)
print("[a, a+] =\n", (a @ ad - ad @ a).real)

# coherent states need N >= |alpha|^2 + 8|alpha| + 10 levels
alpha = 2.0 * np.exp(0.4j)
s = q.coherent_state(alpha)
print("N =", s.dim, " residual =", q.eigen_residual(s, alpha))

H = q.matterwave_hamiltonian(2.0, 1.0, s.dim, hbar=1.0)
print("<H> =", q.expectation(H, s), " closed form =", q.coherent_energy_closed_form(alpha, 2.0, 1.0, hbar=1.0))

# the vacuum term drags small coherent states below zero energy
print("E(alpha=0.3) =", q.coherent_energy_closed_form(0.3, 2.0, 1.0, hbar=1.0)[0])

# each raising moves one particle out of the reservoir and into the mode
for k in range(4):
    js = q.joint_raising(6, N=6, times=k)
    print(f"k={k}: reservoir deficit {js.mean_reservoir_deficit():.0f}, mode occupation {js.mean_mode_occupation():.0f}")

print("emits at mu_B = 1.2:", q.emission_threshold(1.2, 1.0, hbar=1.0))
