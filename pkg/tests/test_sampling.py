import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import comb

from qdesk import sampling as sp
from qdesk import statevec as sv
from qdesk.errors import CapExceededError

from conftest import random_state

seeds = st.integers(0, 2**32 - 1)


def complex_matrix(n, rng):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


# -- permanents


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), seeds)
def test_ryser_matches_naive(n, seed):
    a = complex_matrix(n, np.random.default_rng(seed))
    assert sp.permanent(a) == pytest.approx(sp.permanent_naive(a), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n", range(1, 8))
def test_permanent_of_ones(n):
    assert sp.permanent(np.ones((n, n))) == pytest.approx(math.factorial(n))
    assert sp.permanent(np.eye(n)) == pytest.approx(1.0)


def test_empty_permanent():
    assert sp.permanent(np.zeros((0, 0))) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), seeds)
def test_permanent_is_multilinear_in_rows(n, seed):
    rng = np.random.default_rng(seed)
    a, b = complex_matrix(n, rng), rng.normal(size=n)
    c = complex(rng.normal(), rng.normal())
    mixed = a.copy()
    mixed[0] = c * a[0] + b
    replaced = a.copy()
    replaced[0] = b
    assert sp.permanent(mixed) == pytest.approx(c * sp.permanent(a) + sp.permanent(replaced), rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), seeds)
def test_permanent_invariant_under_permutation(n, seed):
    rng = np.random.default_rng(seed)
    a = complex_matrix(n, rng)
    shuffled = a[rng.permutation(n)][:, rng.permutation(n)]
    assert sp.permanent(shuffled) == pytest.approx(sp.permanent(a), rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), seeds)
def test_psd_permanent_dominates_determinant(n, seed):
    b = complex_matrix(n, np.random.default_rng(seed))
    a = b @ b.conj().T
    assert sp.permanent(a).real >= np.linalg.det(a).real * (1 - 1e-9)


def test_unitary_permanent_bounded(rng):
    for _ in range(20):
        assert abs(sp.permanent(sp.random_interferometer(5, rng).U)) <= 1 + 1e-12


def test_permanent_validation():
    with pytest.raises(ValueError):
        sp.permanent(np.ones((2, 3)))
    with pytest.raises(CapExceededError):
        sp.permanent(np.ones((21, 21)))
    with pytest.raises(CapExceededError):
        sp.permanent_naive(np.ones((9, 9)))


# -- linear optics


def beam_splitter():
    return sp.Interferometer(np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def test_hong_ou_mandel():
    dist = sp.boson_distribution(beam_splitter(), 2)
    assert dist == pytest.approx({(0, 2): 0.5, (1, 1): 0.0, (2, 0): 0.5})


def test_interferometer_validation():
    with pytest.raises(ValueError):
        sp.Interferometer(np.ones((2, 2)))
    with pytest.raises(ValueError):
        sp.FockConfig((1, -1))


@pytest.mark.parametrize("N, M", [(1, 1), (2, 3), (3, 4), (4, 2)])
def test_fock_configs_are_complete_and_sorted(N, M):
    configs = sp.fock_configs(N, M)
    assert len(configs) == comb(N + M - 1, N, exact=True)
    assert configs == sorted(set(configs))
    assert all(sum(c) == N for c in configs)


def test_fock_config_cap():
    with pytest.raises(CapExceededError):
        sp.fock_configs(12, 20)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2), seeds)
def test_distribution_matches_mode_expansion(N, extra, seed):
    u = sp.random_interferometer(N + extra, np.random.default_rng(seed))
    inp = sp.default_input(N, u.M)
    fast = sp.boson_distribution(u, N)
    slow = sp.boson_distribution_bruteforce(u, inp)
    assert fast.keys() == slow.keys()
    for k in fast:
        assert fast[k] == pytest.approx(slow[k], abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), seeds)
def test_distribution_sums_to_one(N, seed):
    u = sp.random_interferometer(N + 2, np.random.default_rng(seed))
    assert sum(sp.boson_distribution(u, N).values()) == pytest.approx(1.0, abs=1e-10)


def test_log_space_branch_matches_direct(rng):
    u = sp.random_interferometer(12, rng)
    inp = sp.default_input(11, 12)
    out = (2, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0)
    rows = [i for i, v in enumerate(inp) if v]
    cols = [j for j, v in enumerate(out) for _ in range(v)]
    per = sp.permanent(u.U[np.ix_(rows, cols)])
    assert sp.boson_prob(u, inp, out) == pytest.approx(abs(per) ** 2 / 2, rel=1e-10)


def test_photon_number_mismatch():
    with pytest.raises(ValueError):
        sp.boson_prob(beam_splitter(), (1, 0), (1, 1))
    with pytest.raises(ValueError):
        sp.boson_prob(beam_splitter(), (2, 0), (1, 1))
    with pytest.raises(ValueError):
        sp.default_input(3, 2)


def test_haar_moments(rng):
    M, trials = 4, 4000
    entries = np.array([sp.random_interferometer(M, rng).U[0, 0] for _ in range(trials)])
    second = np.abs(entries) ** 2
    assert second.mean() == pytest.approx(1 / M, abs=5 * second.std() / math.sqrt(trials))
    fourth = second**2
    assert fourth.mean() == pytest.approx(2 / (M * (M + 1)), abs=5 * fourth.std() / math.sqrt(trials))


def test_boson_samples_conserve_photons(rng):
    u = sp.random_interferometer(4, rng)
    counts = sp.sample_boson(u, 3, 2000, rng)
    assert sum(counts.values()) == 2000
    assert all(sum(map(int, k.split(","))) == 3 for k in counts)


# -- IQP


def test_empty_iqp_circuit_returns_zero():
    dist = sp.iqp_distribution(sp.IqpCircuit(3, (), 2))
    assert dist[0] == pytest.approx(1.0)


def test_single_z_flips_output():
    dist = sp.iqp_distribution(sp.IqpCircuit(2, (("Z", (1,), 1),), 2))
    assert dist[0b01] == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5), st.sampled_from([1, 2]), st.integers(0, 12), seeds)
def test_diagonal_matches_gate_product(n, gateset, depth, seed):
    c = sp.iqp_random(n, gateset, depth, np.random.default_rng(seed))
    dense = np.eye(2**n, dtype=complex)
    for m in c.gate_matrices():
        dense = m @ dense
    assert np.allclose(np.diag(dense), c.diagonal())
    assert np.allclose(dense, np.diag(np.diag(dense)))
    assert sp.iqp_distribution(c).sum() == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), seeds)
def test_gate_order_does_not_matter(n, seed):
    rng = np.random.default_rng(seed)
    c = sp.iqp_random(n, 2, 10, rng)
    shuffled = sp.IqpCircuit(n, tuple(c.diagonal_ops[i] for i in rng.permutation(10)), 2)
    assert np.allclose(sp.iqp_distribution(c), sp.iqp_distribution(shuffled))


def test_iqp_matches_statevector(rng):
    c = sp.iqp_random(4, 1, 10, rng)
    state = sv.QState.plus(4)
    for m in c.gate_matrices():
        state = sv.QState(4, m @ state.amplitudes)
    for q in range(4):
        state = sv.apply_gate(state, sv.H, q)
    assert np.allclose(state.probabilities(), sp.iqp_distribution(c))


def test_iqp_random_respects_gate_set(rng):
    c = sp.iqp_random(4, 1, 200, rng)
    names = {op[0] for op in c.diagonal_ops}
    assert names == {"SQRTCZ", "T"}
    assert {op[2] for op in c.diagonal_ops if op[0] == "T"} == set(range(1, 8))
    assert {op[0] for op in sp.iqp_random(1, 2, 20, rng).diagonal_ops} == {"Z"}


def test_iqp_validation():
    with pytest.raises(ValueError):
        sp.IqpCircuit(2, (("CCZ", (0, 1, 2), 1),), 2)
    with pytest.raises(ValueError):
        sp.IqpCircuit(2, (("T", (0,), 1),), 2)
    with pytest.raises(ValueError):
        sp.IqpCircuit(2, (("CZ", (0, 0), 1),), 2)
    with pytest.raises(ValueError):
        sp.IqpCircuit(2, (), 3)
    with pytest.raises(ValueError):
        sp.iqp_random(0, 1, 3, np.random.default_rng(0))


def test_iqp_sampling_frequencies(rng):
    c = sp.iqp_random(3, 2, 8, rng)
    shots = 20000
    bits, dist = sp.iqp_sample(c, shots, rng)
    freqs = np.bincount([int(b, 2) for b in bits], minlength=8) / shots
    assert np.all(np.abs(freqs - dist) < 5 * np.sqrt(dist * (1 - dist) / shots) + 1e-12)


def test_sqrt_cz_squares_to_cz():
    assert np.allclose(sp.diagonal_gate("SQRTCZ") ** 2, sp.diagonal_gate("CZ"))
    assert np.allclose(sp.diagonal_gate("T", 2), np.diag(sv.S.matrix))


def test_hadamard_gadget(rng):
    psi = random_state(1, rng)
    p_plus, on_plus, on_minus = sp.hadamard_gadget(psi)
    h = sv.apply_gate(psi, sv.H, 0)
    assert p_plus == pytest.approx(0.5)
    assert sv.states_equal(on_plus, h)
    assert sv.states_equal(on_minus, sv.apply_gate(h, sv.X, 0))
