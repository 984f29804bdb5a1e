"""Truncated Fock-space model of a single matter-wave mode.

Operators are dense complex ``numpy`` arrays. Truncating the ladder
operators at ``N`` levels only corrupts the top level: ``[a, a+]`` equals the
identity except for the ``(N-1, N-1)`` entry, which is ``-(N-1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import hbar as HBAR

from .errors import ConsistencyError, DomainError

HERMITIAN_IMAG_TOL = 1e-10


def _positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value!r}")


def ladder_matrices(N):
    """Annihilation and creation matrices on ``N`` Fock levels."""
    if N < 2:
        raise DomainError("truncation must keep at least 2 levels")
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def number_operator(N):
    """a+a, built directly as diag(0, 1, ..., N-1) so the integers are exact."""
    if N < 2:
        raise DomainError("truncation must keep at least 2 levels")
    return np.diag(np.arange(N, dtype=float)).astype(complex)


def matter_hamiltonian(omega, N, hbar=HBAR):
    """hbar*omega*b+b: spectrum hbar*omega*n, ground state at zero."""
    _positive("omega", omega)
    return hbar * omega * number_operator(N)


def matteron_hamiltonian(nu, N, hbar=HBAR):
    """Inverted oscillator -hbar*nu*(a+a + 1/2): every level is negative."""
    _positive("nu", nu)
    return -hbar * nu * (number_operator(N) + 0.5 * np.eye(N))


def matterwave_hamiltonian(omega, nu, N, hbar=HBAR):
    """Combined mode: hbar*(omega - nu)*a+a - hbar*nu/2."""
    _positive("omega", omega)
    _positive("nu", nu)
    return hbar * (omega - nu) * number_operator(N) - 0.5 * hbar * nu * np.eye(N)


@dataclass(frozen=True)
class TruncatedState:
    amplitudes: np.ndarray
    label: str = "custom"

    @property
    def dim(self):
        return self.amplitudes.size

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def to_dict(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float), d.get("label", "custom"))


def fock_state(n, N):
    if not 0 <= n < N:
        raise DomainError(f"level {n} outside truncation {N}")
    v = np.zeros(N, dtype=complex)
    v[n] = 1.0
    return TruncatedState(v, f"fock {n}")


def required_truncation(alpha):
    """Smallest N satisfying N >= |alpha|**2 + 8|alpha| + 10."""
    r = abs(alpha)
    return math.ceil(r * r + 8.0 * r + 10.0)


def coherent_state(alpha, N=None):
    """Truncated coherent state with c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).

    The vector is not renormalized; the truncation rule keeps the missing
    tail mass below ~1e-12.
    """
    alpha = complex(alpha)
    need = required_truncation(alpha)
    if N is None:
        N = need
    if N < need:
        raise DomainError(f"truncation N={N} too small for alpha={alpha}; need N >= {need}")
    c = np.empty(N, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, N):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return TruncatedState(c, f"coherent {alpha}")


def eigen_residual(state: TruncatedState, alpha):
    """||a|s> - alpha|s>|| with the truncated annihilation operator."""
    a, _ = ladder_matrices(state.dim)
    return float(np.linalg.norm(a @ state.amplitudes - alpha * state.amplitudes))


def expectation(op, s: TruncatedState):
    """<s|op|s>; real for Hermitian ``op`` (imaginary part checked against 1e-10)."""
    op = np.asarray(op)
    if op.shape != (s.dim, s.dim):
        raise DomainError(f"operator shape {op.shape} does not match state dimension {s.dim}")
    v = s.amplitudes
    val = complex(np.vdot(v, op @ v))
    if np.allclose(op, op.conj().T, rtol=0, atol=0):
        scale = max(1.0, abs(val))
        if abs(val.imag) > HERMITIAN_IMAG_TOL * scale:
            raise ConsistencyError(f"Hermitian expectation has imaginary part {val.imag:g}")
        return val.real
    return val


def coherent_energy_closed_form(alpha, omega, nu, hbar=HBAR):
    """Mean energy of a coherent state, by both printed forms.

    Returns ``(hbar*(omega-nu)*|alpha|^2 - hbar*nu/2,
    hbar*nu*(1-n^2)/n^2*|alpha|^2 - hbar*nu/2)`` with n^2 = nu/omega,
    after checking they agree.
    """
    _positive("omega", omega)
    _positive("nu", nu)
    a2 = abs(alpha) ** 2
    direct = hbar * (omega - nu) * a2 - 0.5 * hbar * nu
    n2 = nu / omega
    via_index = hbar * nu * (1.0 - n2) / n2 * a2 - 0.5 * hbar * nu
    if abs(direct - via_index) > 1e-12 * max(abs(direct), abs(via_index), hbar * nu):
        raise ConsistencyError("energy forms disagree")
    return direct, via_index


@dataclass
class JointState:
    """Reservoir (window of occupations) times matter-wave mode.

    ``amplitudes[i, m]`` is the coefficient of ``|r_lo + i>|m>``. Only the
    occupations ``r_lo .. Nr`` of the reservoir are kept.
    """

    Nr: int
    r_lo: int
    amplitudes: np.ndarray = field(repr=False)

    @property
    def reservoir_levels(self):
        return np.arange(self.r_lo, self.Nr + 1)

    @property
    def mode_dim(self):
        return self.amplitudes.shape[1]

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def coefficient(self, reservoir, mode):
        return complex(self.amplitudes[reservoir - self.r_lo, mode])

    def mean_mode_occupation(self):
        p = np.abs(self.amplitudes) ** 2
        return float(p.sum(axis=0) @ np.arange(self.mode_dim) / p.sum())

    def mean_reservoir_deficit(self):
        p = np.abs(self.amplitudes) ** 2
        return float(self.Nr - p.sum(axis=1) @ self.reservoir_levels / p.sum())


def joint_ground(Nr, N, depth=8, mode_state: TruncatedState | None = None):
    """``|Nr>|mode>`` (vacuum mode by default) on a reservoir window of ``depth``."""
    if Nr < 1:
        raise DomainError("reservoir must hold at least one particle")
    r_lo = max(0, Nr - depth)
    amps = np.zeros((Nr - r_lo + 1, N), dtype=complex)
    if mode_state is None:
        amps[-1, 0] = 1.0
    else:
        if mode_state.dim != N:
            raise DomainError("mode state dimension does not match N")
        amps[-1, :] = mode_state.amplitudes
    return JointState(Nr, r_lo, amps)


def joint_raise(state: JointState) -> JointState:
    """Apply c+ = a+ (mode) b (reservoir): move one particle into the mode."""
    amps = state.amplitudes
    out = np.zeros_like(amps)
    if state.r_lo > 0 and np.any(amps[0] != 0):
        raise DomainError("reservoir depleted below the truncation window; increase depth")
    if np.any(amps[:, -1] != 0):
        raise DomainError("mode truncation exceeded; increase N")
    levels = state.reservoir_levels
    for i in range(1, amps.shape[0]):
        # b|r> = sqrt(r)|r-1>, a+|m> = sqrt(m+1)|m+1>
        out[i - 1, 1:] = math.sqrt(levels[i]) * np.sqrt(np.arange(1, state.mode_dim)) * amps[i, :-1]
    return JointState(state.Nr, state.r_lo, out)


def joint_raising(Nr, mode_state=None, N=16, times=1, depth=8):
    """``(c+)**times |Nr>|mode>``; a depleted reservoir gives the zero vector."""
    s = joint_ground(Nr, N, depth, mode_state)
    for _ in range(times):
        s = joint_raise(s)
    return s


def removed_energy(k, nu, hbar=HBAR):
    """Energy carried off by the gauge field after ``k`` reservoir particles are emitted."""
    return k * hbar * nu


def emission_threshold(mu_B, nu, hbar=HBAR):
    """True when the mean-field chemical potential can supply a matteron, mu_B >= hbar*nu."""
    return mu_B >= hbar * nu
