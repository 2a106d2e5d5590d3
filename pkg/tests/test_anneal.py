import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from qdesk import statevec as sv
from qdesk.errors import CapExceededError
from qdesk.optimize import (
    AnnealSchedule,
    IsingProblem,
    anneal_evolve,
    encode_maxcut,
    encode_subset_sum,
    gap_scan,
    hamiltonian_matrix,
    ising_terms,
    qa_to_qaoa_angles,
    qaoa_state,
    time_to_solution,
    transverse_field,
)
from qdesk.optimize.anneal import ground_weight_samples


def exact_anneal(p, tau, fine=4000):
    """Reference evolution: many tiny exact steps of the time-dependent Hamiltonian."""
    n = p.n
    h0 = hamiltonian_matrix(transverse_field(n))
    hc = np.diag(p.energies())
    psi = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    dt = tau / fine
    for s in (np.arange(fine) + 0.5) / fine:
        psi = expm(-1j * dt * ((1 - s) * h0 + s * hc)) @ psi
    return psi


def test_trotter_converges_to_exact():
    p = encode_subset_sum([1, 2, 3], 3)
    tau = 3.0
    ref = exact_anneal(p, tau)
    errors = []
    for steps in (10, 20, 40):
        state, _ = anneal_evolve(p, AnnealSchedule(tau, steps))
        errors.append(1 - abs(np.vdot(ref, state.amplitudes)) ** 2)
    assert errors[2] < errors[1] < errors[0]
    assert errors[2] < 1e-3


def test_zero_time_leaves_uniform_state():
    p = encode_maxcut([(0, 1), (1, 2)])
    state, prob = anneal_evolve(p, AnnealSchedule(0.0, 5))
    assert sv.states_equal(state, sv.QState.plus(3))
    assert prob == pytest.approx(2 / 8)


def test_slow_anneal_finds_ground_state():
    _, prob = anneal_evolve(encode_maxcut([(0, 1), (1, 2), (2, 0), (2, 3)]).negated(), AnnealSchedule(60.0, 600))
    assert prob > 0.9


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 12), st.floats(0.05, 1.0), st.integers(0, 2**32 - 1))
def test_qaoa_angles_reproduce_anneal(steps, dt, seed):
    rng = np.random.default_rng(seed)
    n = 3
    p = IsingProblem(np.triu(rng.normal(size=(n, n)), 1), rng.normal(size=n))
    state, _ = anneal_evolve(p, AnnealSchedule(steps * dt, steps))
    mapped = qaoa_state(p, qa_to_qaoa_angles(steps, dt))
    assert sv.states_equal(state, mapped)


def test_qaoa_angles_shape():
    params = qa_to_qaoa_angles(4, 0.5)
    assert params.p == 4
    assert params.gammas == pytest.approx([0.0625, 0.1875, 0.3125, 0.4375])
    assert params.betas[-1] == pytest.approx(-0.5 * (1 - 7 / 8) / 2)
    with pytest.raises(ValueError):
        qa_to_qaoa_angles(0, 1.0)


def test_time_to_solution():
    assert time_to_solution(0.995, 2.0) == 2.0
    assert time_to_solution(0.5, 1.0) == pytest.approx(math.log(0.01) / math.log(0.5))
    assert time_to_solution(0.98, 3.0) == pytest.approx(3.0 * math.log(0.01) / math.log(0.02))
    with pytest.raises(ValueError):
        time_to_solution(0.0, 1.0)


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(1.0, 0)
    with pytest.raises(ValueError):
        AnnealSchedule(-1.0, 3)
    assert AnnealSchedule(2.0, 4).dt == 0.5


def test_two_level_gap():
    scan = gap_scan(-sv.X.matrix, -sv.Z.matrix, resolution=1e-3)
    assert scan.min_gap == pytest.approx(math.sqrt(2), abs=1e-6)
    assert scan.s_min == pytest.approx(0.5)
    assert scan.gaps[0] == pytest.approx(2.0)


def test_gap_scan_accepts_terms():
    p = encode_maxcut([(0, 1), (1, 2)]).negated()
    from_terms = gap_scan(transverse_field(3), ising_terms(p), 1e-2)
    from_mats = gap_scan(hamiltonian_matrix(transverse_field(3)), hamiltonian_matrix(ising_terms(p)), 1e-2)
    assert np.allclose(from_terms.gaps, from_mats.gaps)


def test_gap_scan_validation():
    with pytest.raises(ValueError):
        gap_scan(np.eye(2), np.eye(4))
    with pytest.raises(CapExceededError):
        gap_scan(np.eye(2**11), np.eye(2**11))


def test_ising_terms_match_energies():
    p = IsingProblem.from_couplings(3, {(0, 1): 0.7, (1, 2): -1.2}, fields=[0.3, 0, 0.5], offset=2.0)
    diag = np.diag(hamiltonian_matrix(ising_terms(p))).real
    assert np.allclose(diag + p.offset, p.energies())


def test_sampled_ground_weight(rng):
    p = encode_maxcut([(0, 1), (1, 2)]).negated()
    state, prob = anneal_evolve(p, AnnealSchedule(2.0, 20))
    shots = 10000
    est = ground_weight_samples(state, p, shots, rng)
    assert abs(est - prob) < 5 * math.sqrt(prob * (1 - prob) / shots)


def test_anneal_cap():
    with pytest.raises(CapExceededError):
        anneal_evolve(encode_maxcut([(0, 1)]), AnnealSchedule(1.0, 2), max_qubits=1)
