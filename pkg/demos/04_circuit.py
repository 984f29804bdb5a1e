"""
Matter-wave circuits
====================

Voltage and current duals, the flux carried by a negative-power field, and
a matched-load sweep through a transmission line.
"""

import numpy as np

from mwx import circuit
from mwx.params import ModeSpec, derive_constitutive

c = derive_constitutive(ModeSpec(mass=1.0, drive_frequency=1.0, particle_frequency=4.0, hbar=1.0, charge=1.0))
port = circuit.PortQuantities.from_current_density(1.0, 1.0, c)
print(f"V0 = {port.V0:.6f}, I0 = {port.I0:.6f}, Pf = {port.Pf:.6f}, Im = {port.flux_Im:.6f}")

# the n << 1 flux formula against the exact one
for n in (0.3, 0.1, 0.01):
    ex = circuit.current_from_flux(1.0, 1.0, 1.0, n, "exact")
    sm = circuit.current_from_flux(1.0, 1.0, 1.0, n, "smalln")
    print(f"n={n:<5} exact={ex:.5f} small-n={sm:.5f} rel diff={abs(ex - sm) / ex:.1e}")

# reflection at an impedance step, here between two matter-wave media
print(circuit.step_reflection(-1.0, -3.0))

# source and line both 50 ohm: the load power peaks at RL = 50
line = circuit.abcd_line_segment(50.0, 1.0, 0.8)
loads = np.linspace(10, 150, 141)
P = circuit.load_sweep(1.0, 50.0, line, loads)
print("best RL:", loads[np.argmax(P)], "P max:", P.max())

# a quarter-wave section inverts the load about Zc
qw = circuit.quarter_wave(c.Zf, c.k)
print("Zin =", circuit.input_impedance(qw, -0.25), " Zc^2/ZL =", c.Zf**2 / -0.25)
