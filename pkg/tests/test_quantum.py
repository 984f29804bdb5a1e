import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwx import quantum as q
from mwx.errors import DomainError


def test_smallest_ladder():
    a, ad = q.ladder_matrices(2)
    np.testing.assert_array_equal(a, [[0, 1], [0, 0]])
    np.testing.assert_array_equal(ad, a.conj().T)
    with pytest.raises(DomainError):
        q.ladder_matrices(1)


@pytest.mark.parametrize("N", [2, 5, 17])
def test_commutator_and_number(N):
    a, ad = q.ladder_matrices(N)
    np.testing.assert_array_equal(np.diag(q.number_operator(N)).real, np.arange(N))
    np.testing.assert_allclose(ad @ a, q.number_operator(N), atol=1e-13)
    comm = a @ ad - ad @ a
    expected = np.eye(N)
    expected[-1, -1] = -(N - 1)
    np.testing.assert_allclose(comm, expected, atol=1e-13)


def test_hamiltonian_values():
    N = 6
    assert not (q.matter_hamiltonian(3.0, N, hbar=1.0) @ q.fock_state(0, N).amplitudes).any()
    assert q.matteron_hamiltonian(1.0, N, hbar=1.0)[0, 0] == -0.5
    assert q.matterwave_hamiltonian(2.0, 1.0, N, hbar=1.0)[1, 1] == 0.5


def test_spectrum_signs():
    N = 12
    assert np.all(np.linalg.eigvalsh(q.matteron_hamiltonian(1.3, N, hbar=1.0)) < 0)
    assert np.all(np.linalg.eigvalsh(q.matter_hamiltonian(1.3, N, hbar=1.0)) >= 0)
    levels = np.linalg.eigvalsh(q.matterwave_hamiltonian(4.0, 1.0, N, hbar=1.0))
    assert np.all(np.diff(levels) > 0)
    np.testing.assert_allclose(np.diff(levels), 3.0, rtol=1e-12)


def test_vacuum_coherent_state():
    s = q.coherent_state(0.0)
    assert s.amplitudes[0] == 1 and not s.amplitudes[1:].any()
    assert q.eigen_residual(s, 0.0) == 0


def test_coherent_moments():
    s = q.coherent_state(2.0, 64)
    assert q.expectation(q.number_operator(64), s) == pytest.approx(4.0, abs=1e-9)
    alpha = 1.7 * np.exp(0.9j)
    s = q.coherent_state(alpha)
    a, _ = q.ladder_matrices(s.dim)
    assert abs(q.expectation(a, s) - alpha) < 1e-9


def test_truncation_rule_enforced():
    need = q.required_truncation(3.0)
    assert need == 43
    with pytest.raises(DomainError, match="43"):
        q.coherent_state(3.0, 20)


def test_expectation_contract():
    s = q.fock_state(3, 8)
    assert q.expectation(q.number_operator(8), s) == 3
    assert q.expectation(np.eye(15), q.coherent_state(0.5)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        q.expectation(np.eye(5), s)


def test_coherent_energy_values():
    alpha = 2.0
    s = q.coherent_state(alpha)
    H = q.matterwave_hamiltonian(2.0, 1.0, s.dim, hbar=1.0)
    assert q.expectation(H, s) == pytest.approx(3.5, rel=1e-10)
    assert q.coherent_energy_closed_form(alpha, 2.0, 1.0, hbar=1.0) == pytest.approx((3.5, 3.5), rel=1e-14)
    assert q.coherent_energy_closed_form(0.0, 2.0, 1.0, hbar=1.0)[0] == -0.5
    assert q.coherent_energy_closed_form(5.0, 1.0, 1.0, hbar=1.0)[0] == -0.5


def test_vacuum_term_makes_small_states_negative():
    # printed formula kept verbatim: |alpha|^2 < nu / (2 (omega - nu)) gives E < 0
    assert q.coherent_energy_closed_form(0.3, 2.0, 1.0, hbar=1.0)[0] < 0


def test_state_round_trip():
    s = q.coherent_state(1.0 - 0.5j)
    back = q.TruncatedState.from_dict(s.to_dict())
    np.testing.assert_array_equal(back.amplitudes, s.amplitudes)
    assert back.label == s.label


def test_joint_raising_values():
    s = q.joint_raising(4, N=4)
    assert s.coefficient(3, 1) == pytest.approx(2.0)
    empty = q.joint_raising(1, N=4, times=2)
    assert empty.norm == 0


def test_joint_raising_guards():
    with pytest.raises(DomainError):
        q.joint_raising(20, N=6, times=4, depth=2)
    with pytest.raises(DomainError):
        q.joint_raising(5, N=2, times=2)


@pytest.mark.parametrize("Nr,k", [(1, 1), (3, 2), (5, 3), (6, 6), (10, 4)])
def test_one_for_one_bookkeeping(Nr, k):
    s = q.joint_raising(Nr, N=k + 2, times=k, depth=8)
    expected = math.sqrt(math.factorial(Nr) / math.factorial(Nr - k) * math.factorial(k))
    assert s.norm / expected == pytest.approx(1.0, rel=1e-12)
    assert s.mean_reservoir_deficit() == pytest.approx(k, abs=1e-12)
    assert s.mean_mode_occupation() == pytest.approx(k, abs=1e-12)


def test_joint_raising_brute_force():
    # full tensor product with untruncated reservoir
    Nr, N, k = 4, 5, 3
    b, _ = q.ladder_matrices(Nr + 1)
    _, ad = q.ladder_matrices(N)
    c_plus = np.kron(b, ad)
    v = np.zeros((Nr + 1) * N, complex)
    v[Nr * N] = 1.0
    for _ in range(k):
        v = c_plus @ v
    full = v.reshape(Nr + 1, N)
    s = q.joint_raising(Nr, N=N, times=k, depth=Nr)
    np.testing.assert_allclose(s.amplitudes, full[s.r_lo:], atol=1e-12)


def test_threshold_and_removed_energy():
    assert q.emission_threshold(2.0, 1.0, hbar=1.0)
    assert q.emission_threshold(1.0, 1.0, hbar=1.0)
    assert not q.emission_threshold(0.5, 1.0, hbar=1.0)
    assert q.removed_energy(3, 2.0, hbar=1.0) == 6.0


@pytest.mark.parametrize("alpha", [1.0, 2.0, 3.0])
def test_residual_decreases_with_truncation(alpha):
    res = [q.eigen_residual(q.coherent_state(alpha, N), alpha) for N in range(q.required_truncation(alpha), 80, 2)]
    # strictly decreasing until the tail term reaches the rounding floor of |a s - alpha s|
    above = [x for x in res if x > 1e-15]
    assert len(above) >= 2
    assert all(x > y for x, y in zip(above, above[1:]))
    assert all(x <= above[-1] for x in res[len(above):])


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 3), st.floats(0, 2 * math.pi), st.floats(1.01, 10))
def test_coherent_energy_matches_closed_form(r, ph, ratio):
    alpha = r * np.exp(1j * ph)
    nu, omega = 1.0, ratio
    s = q.coherent_state(alpha)
    assert q.eigen_residual(s, alpha) < 1e-6
    H = q.matterwave_hamiltonian(omega, nu, s.dim, hbar=1.0)
    e = q.expectation(H, s)
    ref = q.coherent_energy_closed_form(alpha, omega, nu, hbar=1.0)[0]
    # relative to the term magnitudes; ref itself crosses zero at |alpha|^2 = nu / (2 (omega - nu))
    scale = (omega - nu) * abs(alpha) ** 2 + 0.5 * nu
    assert abs(e - ref) <= 1e-8 * scale
