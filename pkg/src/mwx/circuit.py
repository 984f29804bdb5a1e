"""Matter-wave circuit quantities and lossless transmission-line networks.

Power convention throughout: ``P = 0.5 * Re(V * conj(I))`` with peak
amplitudes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegenerateError, DomainError
from .params import ConstitutiveSet


@dataclass(frozen=True)
class PortQuantities:
    """Voltage/current duals and power flow of a single-mode matter wave."""

    V0: complex
    I0: complex
    S_area: float
    Zf: float
    flux_Im: float
    Pf: float

    @classmethod
    def from_current_density(cls, J0, S_area, c: ConstitutiveSet):
        from .planewave import potential_amplitudes

        phi0, _ = potential_amplitudes(J0, c)
        V0, I0 = voltage_current_duals(J0, phi0, S_area, c.k0, Zf=c.Zf)
        Pf = gauge_power(I0, c.Zf)
        return cls(V0, I0, S_area, c.Zf, flux_from_power(Pf, c.spec.nu, c.spec.hbar), Pf)

    @classmethod
    def from_flux(cls, Im, S_area, c: ConstitutiveSet, mode="exact"):
        s = c.spec
        I0 = current_from_flux(Im, s.nu, s.q, c.n, mode)
        V0 = voltage_from_flux(Im, s.nu, s.q, s.hbar, c.n, mode)
        return cls(complex(V0), complex(I0), S_area, c.Zf, Im, -Im * s.hbar * s.nu)


def voltage_current_duals(J0, phi0, S_area, k0, Zf=None, rtol=1e-9):
    """``V0 = k0**2 * S * phi0`` and ``I0 = S * J0``.

    With ``Zf`` given, also checks the Ohm's-law dual V0 = Zf * I0.
    """
    if not S_area > 0:
        raise DomainError("effective area must be positive")
    V0 = k0**2 * S_area * phi0
    I0 = S_area * J0
    if Zf is not None:
        expected = Zf * I0
        if abs(V0 - expected) > rtol * max(abs(V0), abs(expected), 1e-300):
            raise ConsistencyError(f"V0 = {V0!r} but Zf*I0 = {expected!r}")
    return V0, I0


def gauge_power(I0, Zf):
    """Power carried by the gauge field, 0.5 * Zf * |I0|**2."""
    return 0.5 * Zf * abs(I0) ** 2


def flux_from_power(Pf, nu, hbar):
    """Particle flux ``-Pf / (hbar * nu)``."""
    return -Pf / (hbar * nu)


def _check_flux_args(Im, n, mode):
    if Im < 0:
        raise DomainError("particle flux must be non-negative")
    if mode not in ("exact", "smalln"):
        raise DomainError(f"unknown mode {mode!r}")
    if not 0 < n < 1:
        raise DomainError("flux formulas need 0 < n < 1")


def current_from_flux(Im, nu, q, n, mode="exact"):
    """Current amplitude carrying particle flux ``Im``.

    ``smalln`` is the n << 1 limit ``q*sqrt(2*Im*nu/n)``; ``exact`` keeps
    the ``(1 - n**2)`` factor from equating the two power expressions.
    """
    _check_flux_args(Im, n, mode)
    if mode == "smalln":
        return q / math.sqrt(n) * math.sqrt(2.0 * Im * nu)
    return q * math.sqrt(2.0 * Im * nu * (1.0 - n * n) / n)


def voltage_from_flux(Im, nu, q, hbar, n, mode="exact"):
    _check_flux_args(Im, n, mode)
    if mode == "smalln":
        return -hbar * math.sqrt(n) / q * math.sqrt(2.0 * Im * nu)
    Zf = -hbar / q**2 * n / (1.0 - n * n)
    return Zf * current_from_flux(Im, nu, q, n, "exact")


def step_reflection(Z1, Z2):
    """Amplitude and power coefficients at an impedance step Z1 -> Z2."""
    if Z1 == 0 or Z2 == 0:
        raise DomainError("impedances must be nonzero")
    if np.real(Z1) * np.real(Z2) < 0:
        raise DomainError("impedances must share a sign")
    total = Z1 + Z2
    if total == 0:
        raise DegenerateError("Z1 + Z2 = 0")
    r = (Z2 - Z1) / total
    R = abs(r) ** 2
    return {"r": r, "t": 2.0 * Z2 / total, "R_power": R, "T_power": 1.0 - R}


@dataclass(frozen=True)
class TwoPort:
    abcd: np.ndarray
    descriptor: str = "segment"

    @property
    def det(self):
        return complex(np.linalg.det(self.abcd))


def abcd_line_segment(Zc, k, length):
    """ABCD matrix of a lossless line of impedance Zc (either sign)."""
    if length < 0:
        raise DomainError("segment length must be non-negative")
    if Zc == 0:
        raise DomainError("characteristic impedance must be nonzero")
    kl = k * length
    c, s = math.cos(kl), math.sin(kl)
    return TwoPort(np.array([[c, 1j * Zc * s], [1j * s / Zc, c]], dtype=complex))


def cascade(parts):
    """Ordered product of two-ports, source side first."""
    m = np.eye(2, dtype=complex)
    for p in parts:
        m = m @ p.abcd
    return TwoPort(m, "cascade")


def input_impedance(tp: TwoPort, ZL):
    (A, B), (C, D) = tp.abcd
    den = C * ZL + D
    if abs(den) < 1e-300:
        raise DegenerateError("input impedance is infinite")
    return (A * ZL + B) / den


def delivered_power(Vs, Rs, tp: TwoPort, ZL):
    """Average power into ``ZL`` from a source ``Vs`` with series ``Rs`` through ``tp``."""
    if ZL == 0:
        raise DomainError("load impedance must be nonzero")
    Zin = input_impedance(tp, ZL)
    if Rs + Zin == 0:
        raise DegenerateError("source and input impedance cancel")
    I1 = Vs / (Rs + Zin)
    V1 = I1 * Zin
    (A, B), (C, D) = tp.abcd
    # [V1, I1] = ABCD @ [V2, I2]; det = 1 for reciprocal networks
    det = A * D - B * C
    V2 = (D * V1 - B * I1) / det
    I2 = (-C * V1 + A * I1) / det
    return 0.5 * (V2 * np.conj(I2)).real


def load_sweep(Vs, Rs, tp: TwoPort, loads):
    """Delivered power for each load in ``loads``."""
    return np.array([delivered_power(Vs, Rs, tp, RL) for RL in loads])


def quarter_wave(Zc, k):
    return abcd_line_segment(Zc, k, 0.5 * math.pi / k)
