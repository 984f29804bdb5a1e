"""Mode inputs and the constitutive constants of the matter-wave field.

All quantities are SI unless ``hbar`` is overridden, which is how the test
fixtures run in natural units (hbar = m = q = 1).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

from scipy.constants import hbar as HBAR

from .errors import ConsistencyError, DomainError, RegimeWarning, SingularityError

EPS_SINGULAR = 1e-9
IDENTITY_RTOL = 1e-12


class ChargeConvention(str, Enum):
    UNIT_CHARGE = "unit_charge"
    MASS_CHARGE = "mass_charge"


def _positive(name, value):
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def _rel_close(a, b, rtol=IDENTITY_RTOL):
    return abs(a - b) <= rtol * max(abs(a), abs(b))


@dataclass(frozen=True)
class ModeSpec:
    """Physical inputs for a single matter-wave mode.

    Parameters
    ----------
    mass : float
        Particle mass (kg).
    drive_frequency : float
        Angular frequency of the imposed current oscillation, nu (rad/s).
    particle_frequency : float
        Planck-Einstein frequency of the particles, omega (rad/s).
    hbar : float, optional
        Reduced action constant. Defaults to the CODATA value.
    charge : float, optional
        Explicit interaction "charge". When omitted it follows
        ``charge_convention``: 1 for ``unit_charge``, ``mass`` for
        ``mass_charge``.
    charge_convention : ChargeConvention or str
    eps_singular : float
        Minimum allowed ``|1 - nu/omega|``.
    """

    mass: float
    drive_frequency: float
    particle_frequency: float
    hbar: float = HBAR
    charge: float | None = None
    charge_convention: ChargeConvention = ChargeConvention.UNIT_CHARGE
    eps_singular: float = EPS_SINGULAR

    def __post_init__(self):
        object.__setattr__(self, "charge_convention", ChargeConvention(self.charge_convention))
        _positive("mass", self.mass)
        _positive("hbar", self.hbar)
        _positive("drive_frequency", self.drive_frequency)
        _positive("particle_frequency", self.particle_frequency)
        if self.charge is not None and (self.charge == 0 or not math.isfinite(self.charge)):
            raise DomainError("charge must be nonzero and finite")
        if abs(1.0 - self.drive_frequency / self.particle_frequency) <= self.eps_singular:
            raise SingularityError(
                "drive and particle frequencies coincide (n = 1): the field amplitudes diverge"
            )

    @property
    def q(self):
        if self.charge is not None:
            return self.charge
        if self.charge_convention is ChargeConvention.MASS_CHARGE:
            return self.mass
        return 1.0

    @property
    def nu(self):
        return self.drive_frequency

    @property
    def omega(self):
        return self.particle_frequency


@dataclass(frozen=True)
class ConstitutiveSet:
    """Every derived constant of a mode. Build with :func:`derive_constitutive`."""

    v0: float
    vm: float
    n: float
    k: float
    k0: float
    Z0: float
    Zf: float
    eta0: float
    eta: float
    xi0: float
    xi: float
    spec: ModeSpec = field(repr=False, compare=False)

    def check(self, rtol=IDENTITY_RTOL):
        """Raise ConsistencyError unless all redundant definitions agree."""
        s = self.spec
        pairs = {
            "n = v0/vm": (self.n, self.v0 / self.vm),
            "n^2 = nu/omega": (self.n**2, s.nu / s.omega),
            "eta0*xi0 = 1/v0^2": (self.eta0 * self.xi0, 1.0 / self.v0**2),
            "eta*xi = 1/vm^2": (self.eta * self.xi, 1.0 / self.vm**2),
            "Z0 = sqrt(eta0/xi0)": (self.Z0, math.sqrt(self.eta0 / self.xi0)),
            "Zf = -sqrt(eta/xi)": (self.Zf, -math.sqrt(self.eta / self.xi)),
            "k = n*k0": (self.k, self.n * self.k0),
            "k0 = nu/v0": (self.k0, s.nu / self.v0),
        }
        bad = [name for name, (a, b) in pairs.items() if not _rel_close(a, b, rtol)]
        if self.n < 1 and not self.Zf < 0:
            bad.append("Zf < 0 for n < 1")
        if bad:
            raise ConsistencyError("constitutive identities violated: " + ", ".join(bad))
        return self


def limiting_velocity(nu, m, hbar=HBAR):
    """Lower bound on the particle velocity, sqrt(2 hbar nu / m)."""
    _positive("nu", nu)
    _positive("m", m)
    _positive("hbar", hbar)
    return math.sqrt(2.0 * hbar * nu / m)


def group_velocity(omega, m, hbar=HBAR):
    """Particle group velocity sqrt(2 hbar omega / m)."""
    _positive("omega", omega)
    _positive("m", m)
    _positive("hbar", hbar)
    return math.sqrt(2.0 * hbar * omega / m)


def refractive_index(nu, omega):
    _positive("nu", nu)
    _positive("omega", omega)
    return math.sqrt(nu / omega)


def quantum_impedance(q, hbar=HBAR):
    """Z0 = hbar / q**2."""
    if q == 0:
        raise DomainError("charge must be nonzero")
    _positive("hbar", hbar)
    return hbar / q**2


def wave_impedance(Z0, n, eps_singular=EPS_SINGULAR):
    """Characteristic impedance of the matter-wave field, -Z0 n / (1 - n^2).

    Negative for 0 < n < 1. ``n > 1`` is allowed but emits a RegimeWarning.
    """
    if n < 0:
        raise DomainError("refractive index must be non-negative")
    gap = 1.0 - n * n
    if abs(gap) <= eps_singular:
        raise SingularityError("n = 1: the field amplitudes diverge")
    if n > 1:
        warnings.warn(f"n = {n:g} > 1 is outside the usual matter-wave regime", RegimeWarning, stacklevel=2)
    return -Z0 * n / gap


def derive_constitutive(spec: ModeSpec) -> ConstitutiveSet:
    """Compute the full constitutive set for ``spec`` and verify its identities."""
    nu, omega, m, hb = spec.nu, spec.omega, spec.mass, spec.hbar
    v0 = limiting_velocity(nu, m, hb)
    vm = group_velocity(omega, m, hb)
    n = v0 / vm
    if abs(1.0 - n * n) <= spec.eps_singular:
        raise SingularityError("n = 1: the field amplitudes diverge")
    Z0 = quantum_impedance(spec.q, hb)
    Zf = wave_impedance(Z0, n, spec.eps_singular)
    eta0 = Z0 / v0
    xi0 = 1.0 / (Z0 * v0)
    eta = eta0 * n * n / (1.0 - n * n)
    xi = xi0 * (1.0 - n * n)
    k0 = nu / v0
    c = ConstitutiveSet(
        v0=v0, vm=vm, n=n, k=n * k0, k0=k0, Z0=Z0, Zf=Zf,
        eta0=eta0, eta=eta, xi0=xi0, xi=xi, spec=spec,
    )
    if n > 1:
        # Zf > 0 and eta < 0 here, so -sqrt(eta/xi) is not real; only check what still holds.
        return c
    return c.check()


def as_dict(c: ConstitutiveSet):
    """Plain-float mapping of a constitutive set, in a fixed key order."""
    keys = ("n", "v0", "vm", "k", "k0", "Z0", "Zf", "eta0", "eta", "xi0", "xi")
    return {key: getattr(c, key) for key in keys}
