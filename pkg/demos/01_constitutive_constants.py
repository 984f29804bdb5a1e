"""
Constitutive constants of a matter-wave mode
============================================

A mode is fixed by the particle mass, the drive frequency nu and the
particle frequency omega. Everything else follows.
"""

import numpy as np

from mwx.params import ModeSpec, as_dict, derive_constitutive

# natural units: m = q = hbar = 1, with nu/omega = 1/4 so that n = 1/2
spec = ModeSpec(mass=1.0, drive_frequency=1.0, particle_frequency=4.0, hbar=1.0, charge=1.0)
c = derive_constitutive(spec)
for key, value in as_dict(c).items():
    print(f"{key:5s} {value: .7f}")

# the wave impedance is negative below n = 1 and grows without bound near it
omega = 4.0
for nu in (0.04, 0.4, 1.0, 2.0, 3.6, 3.96):
    ci = derive_constitutive(ModeSpec(mass=1.0, drive_frequency=nu, particle_frequency=omega, hbar=1.0))
    print(f"n = {ci.n:.3f}   Zf = {ci.Zf: .4f}")

# an electron in SI units, driven at 1 GHz
e = derive_constitutive(ModeSpec(mass=9.1093837e-31, drive_frequency=2 * np.pi * 1e9, particle_frequency=1e15))
print(f"electron: n = {e.n:.3e}, v0 = {e.v0:.3e} m/s, Zf = {e.Zf:.3e}")
