"""Analytic single-frequency plane wave of the matter-wave field.

Phasor convention: every quantity is ``amplitude * exp(1j*(k*x - nu*t))`` and
the physical value is the real part. All the ``+-1j`` factors below follow
from that choice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, SingularityError
from .params import IDENTITY_RTOL, ConstitutiveSet


def _check(name, a, b, rtol=IDENTITY_RTOL):
    scale = max(abs(a), abs(b))
    if abs(a - b) > rtol * scale:
        raise ConsistencyError(f"{name}: {a!r} != {b!r}")


def _require_regular(c: ConstitutiveSet):
    if abs(1.0 - c.n**2) <= c.spec.eps_singular:
        raise SingularityError("n = 1: the field amplitudes diverge")


@dataclass(frozen=True)
class PlaneWaveAmplitudes:
    J0: complex
    rho0: complex
    phi0: complex
    A0: complex
    F0: complex
    G0: complex
    k: float
    nu: float


def charge_density_amplitude(J0, vm):
    """rho0 = J0 / vm, from continuity on the plane-wave ansatz."""
    if not vm > 0:
        raise DomainError("vm must be positive")
    return J0 / vm


def potential_amplitudes(J0, c: ConstitutiveSet):
    """Return ``(phi0, A0)`` for current amplitude ``J0``.

    A0 comes from the vector-potential wave equation and phi0 = n v0 A0.
    The result is checked against the Ohm's-law form phi0 = Zf J0 / k0**2.
    """
    _require_regular(c)
    n2 = c.n**2
    A0 = complex(c.eta0 / c.k**2 * n2 / (n2 - 1.0) * J0)
    phi0 = c.n * c.v0 * A0
    _check("phi0 routes", phi0, c.Zf * J0 / c.k0**2)
    return phi0, A0


def field_amplitudes(J0, c: ConstitutiveSet):
    """Return ``(F0, G0)``.

    F0 is cross-checked against ``1j*nu*(1 - n**2)*A0``, which is what
    F = -dA/dt - dphi/dx gives on the ansatz. G0 is the printed transverse
    amplitude ``-1j*|Zf|*J0/nu``; a longitudinal 1D wave has curl A = 0, so
    nothing downstream compares it with the solver.
    """
    _require_regular(c)
    nu = c.spec.nu
    F0 = complex(-1j * c.Z0 * J0 / c.k0)
    G0 = complex(-1j * abs(c.Zf) * J0 / nu)
    _, A0 = potential_amplitudes(J0, c)
    _check("F0 routes", F0, 1j * nu * (1.0 - c.n**2) * A0)
    return F0, G0


def plane_wave(J0, c: ConstitutiveSet) -> PlaneWaveAmplitudes:
    J0 = complex(J0)
    phi0, A0 = potential_amplitudes(J0, c)
    F0, G0 = field_amplitudes(J0, c)
    return PlaneWaveAmplitudes(
        J0=J0,
        rho0=complex(charge_density_amplitude(J0, c.vm)),
        phi0=phi0, A0=A0, F0=F0, G0=G0,
        k=c.k, nu=c.spec.nu,
    )


def evaluate_wave(amps: PlaneWaveAmplitudes, x, t):
    """Complex point values of J, rho, phi, A and F at ``(x, t)``.

    ``x`` and ``t`` broadcast against each other.
    """
    phase = np.exp(1j * (amps.k * np.asarray(x, dtype=float) - amps.nu * np.asarray(t, dtype=float)))
    if phase.ndim == 0:
        phase = complex(phase)
    return {
        "J": amps.J0 * phase,
        "rho": amps.rho0 * phase,
        "phi": amps.phi0 * phase,
        "A": amps.A0 * phase,
        "F": amps.F0 * phase,
    }


def wave_power_sign(J0, c: ConstitutiveSet):
    """Re(Zf)|J0|^2, negative whenever 0 < n < 1."""
    return (c.Zf * abs(complex(J0)) ** 2).real


def de_broglie_reference_wavenumber(c: ConstitutiveSet):
    """k0 evaluated at nu = omega, i.e. omega / vm.

    As n -> 1 the field wavenumber k approaches this value.
    """
    return c.spec.omega / c.vm

