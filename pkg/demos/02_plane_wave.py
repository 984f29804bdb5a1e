"""
The analytic plane wave
=======================

A current J0 exp(i(kx - nu t)) fixes every other amplitude.
"""

import numpy as np

from mwx.params import ModeSpec, derive_constitutive
from mwx.planewave import evaluate_wave, plane_wave, wave_power_sign

c = derive_constitutive(ModeSpec(mass=1.0, drive_frequency=1.0, particle_frequency=4.0, hbar=1.0, charge=1.0))
amps = plane_wave(1.0, c)
for name in ("rho0", "phi0", "A0", "F0", "G0"):
    print(f"{name:4s} = {getattr(amps, name):.7f}")

# the scalar potential obeys an Ohm's-law form, phi0 = Zf J0 / k0**2
print("Zf J0 / k0^2 =", c.Zf / c.k0**2)

# the power term Re(Zf)|J0|^2 is negative for 0 < n < 1
print("power sign:", np.sign(wave_power_sign(1.0, c)))

# one wavelength of the real fields
x = np.linspace(0, 2 * np.pi / c.k, 9)
w = evaluate_wave(amps, x, 0.0)
print(np.column_stack([x, w["phi"].real, w["F"].real]).round(4))
