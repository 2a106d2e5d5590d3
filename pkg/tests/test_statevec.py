import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdesk import statevec as sv
from qdesk.clifford import PauliString
from qdesk.errors import CapExceededError

from conftest import random_state, random_unitary


def test_x_flips_zero():
    out = sv.apply_gate(sv.QState.zero(1), sv.X, 0)
    assert np.allclose(out.amplitudes, [0, 1])


def test_h_makes_plus():
    out = sv.apply_gate(sv.QState.zero(1), sv.H, 0)
    assert np.allclose(out.amplitudes, [1 / math.sqrt(2)] * 2)


def test_cnot_on_11_gives_10():
    out = sv.apply_gate(sv.QState.basis("11"), sv.CNOT, (0, 1))
    assert sv.states_equal(out, sv.QState.basis("10"))


def test_qubit_zero_is_most_significant():
    out = sv.apply_gate(sv.QState.zero(3), sv.X, 0)
    assert out.amplitudes[0b100] == 1


@pytest.mark.parametrize(
    "gate, expected",
    [(sv.X, sv.CNOT.matrix), (sv.Z, np.diag([1, 1, 1, -1])), (sv.I, np.eye(4))],
)
def test_controlled(gate, expected):
    assert np.allclose(sv.controlled(gate).matrix, expected)


def test_controlled_rejects_four_qubits():
    with pytest.raises(ValueError):
        sv.controlled(sv.TOFFOLI)


@pytest.mark.parametrize("targets", [(0, 0), (0, 3), (0,)])
def test_apply_gate_validates_targets(targets):
    with pytest.raises(ValueError):
        sv.apply_gate(sv.QState.zero(3), sv.CNOT, targets)


def test_gate_rejects_non_unitary():
    with pytest.raises(ValueError):
        sv.GateSpec("bad", [[1, 1], [0, 1]])


def test_unnormalized_state_rejected():
    with pytest.raises(ValueError):
        sv.QState.from_amplitudes([1, 1])


def test_qubit_cap():
    with pytest.raises(CapExceededError):
        sv.QState.zero(5, max_qubits=4)


def test_rk_matches_definition():
    assert np.allclose(sv.rk(3).matrix, np.diag([1, np.exp(2j * np.pi / 8)]))


def eq_phase(a, b):
    return sv.equal_up_to_phase(np.asarray(a), np.asarray(b), 1e-12)


def test_gate_identities():
    X, Y, Z, H, T = (g.matrix for g in (sv.X, sv.Y, sv.Z, sv.H, sv.T))
    assert np.allclose(H @ X @ H, Z, atol=1e-12)
    assert np.allclose(H @ Y @ H, -Y, atol=1e-12)
    assert np.allclose(H @ Z @ H, X, atol=1e-12)
    assert np.allclose(X @ Y @ X, -Y, atol=1e-12)
    assert eq_phase(H @ T @ H, sv.rx(np.pi / 4).matrix)
    ih = np.kron(np.eye(2), H)
    assert np.allclose(ih @ sv.CZ.matrix @ ih, sv.CNOT.matrix, atol=1e-12)


def test_fredkin_from_three_toffolis():
    c = sv.Circuit(3).add("TOFFOLI", (0, 2, 1)).add("TOFFOLI", (0, 1, 2)).add("TOFFOLI", (0, 2, 1))
    assert np.allclose(sv.circuit_unitary(c), sv.FREDKIN.matrix, atol=1e-12)


def test_measure_basis_state():
    bit, post = sv.measure_qubit(sv.QState.zero(1), 0, np.random.default_rng(0))
    assert bit == 0 and sv.states_equal(post, sv.QState.zero(1))


def test_measure_plus_is_fair(rng):
    bits = [sv.measure_qubit(sv.QState.plus(1), 0, rng)[0] for _ in range(4000)]
    assert abs(np.mean(bits) - 0.5) < 5 * math.sqrt(0.25 / 4000)


@pytest.mark.parametrize("m", [0, 1])
def test_bell_measurement_collapses(m):
    bell = sv.run_circuit(sv.Circuit(2).add("H", 0).add("CNOT", (0, 1)))
    bit, post = sv.measure_qubit(bell, 0, forced=m)
    assert bit == m
    assert sv.states_equal(post, sv.QState.basis(f"{m}{m}"))


def test_forced_zero_probability_branch_raises():
    with pytest.raises(ValueError):
        sv.measure_qubit(sv.QState.zero(1), 0, forced=1)


def test_sample_counts_basis():
    assert sv.sample_counts(sv.QState.basis("1"), 100, np.random.default_rng(1)) == {"1": 100}


def test_sample_counts_plus_statistics(rng):
    counts = sv.sample_counts(sv.QState.plus(1), 10**5, rng)
    assert sum(counts.values()) == 10**5
    assert abs(counts["0"] - 50000) < 5 * math.sqrt(10**5 / 4)


def test_ghz_support(rng):
    ghz = sv.run_circuit(sv.Circuit(3).add("H", 0).add("CNOT", (0, 1)).add("CNOT", (1, 2)))
    assert set(sv.sample_counts(ghz, 10**4, rng)) <= {"000", "111"}


def test_measure_marginal_matches_sampling(rng):
    psi = random_state(3, rng)
    p1 = sv.outcome_probability(psi, 1, 1)
    shots = 20000
    counts = sv.sample_counts(psi, shots, rng)
    freq = sum(v for k, v in counts.items() if k[1] == "1") / shots
    assert abs(freq - p1) < 5 * math.sqrt(p1 * (1 - p1) / shots)


@pytest.mark.parametrize(
    "label, state, expected",
    [("Z", sv.QState.zero(1), 1.0), ("X", sv.QState.plus(1), 1.0)],
)
def test_expectation_simple(label, state, expected):
    assert sv.expectation_pauli(state, PauliString.from_label(label)) == pytest.approx(expected)


def test_expectation_bell_xx():
    bell = sv.run_circuit(sv.Circuit(2).add("H", 0).add("CNOT", (0, 1)))
    assert sv.expectation_pauli(bell, PauliString.from_label("XX")) == pytest.approx(1.0)


def test_expectation_matches_dense(rng):
    psi = random_state(3, rng)
    for label in ("XYZ", "-IYI", "ZZX"):
        p = PauliString.from_label(label)
        dense = np.vdot(psi.amplitudes, p.to_matrix() @ psi.amplitudes).real
        assert sv.expectation_pauli(psi, p) == pytest.approx(dense, abs=1e-12)


def test_expectation_size_mismatch():
    with pytest.raises(ValueError):
        sv.expectation_pauli(sv.QState.zero(2), PauliString.from_label("Z"))


def test_norm_after_many_gates(rng):
    names = ["H", "S", "T", "X", "Y", "CNOT", "CZ", "SWAP", "TOFFOLI", "RX", "RZ"]
    c = sv.Circuit(4)
    for _ in range(1000):
        name = names[rng.integers(len(names))]
        arity, nparams, _ = sv.GATES[name]
        targets = rng.choice(4, size=arity, replace=False)
        c.add(name, targets, *rng.uniform(0, 2 * np.pi, nparams))
    out = sv.run_circuit(c)
    assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_gate_then_inverse_is_identity(seed, k):
    rng = np.random.default_rng(seed)
    n = 4
    psi = random_state(n, rng)
    g = sv.GateSpec("U", random_unitary(2**k, rng))
    targets = tuple(int(t) for t in rng.choice(n, size=k, replace=False))
    back = sv.apply_gate(sv.apply_gate(psi, g, targets), g.dagger(), targets)
    assert np.allclose(back.amplitudes, psi.amplitudes, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_apply_gate_matches_embedding(seed):
    rng = np.random.default_rng(seed)
    n = 3
    psi = random_state(n, rng)
    g = sv.GateSpec("U", random_unitary(4, rng))
    targets = tuple(int(t) for t in rng.choice(n, size=2, replace=False))
    dense = sv.embed(g.matrix, targets, n) @ psi.amplitudes
    assert np.allclose(sv.apply_gate(psi, g, targets).amplitudes, dense, atol=1e-12)


def test_circuit_inverse(rng):
    c = sv.Circuit(3).add("H", 0).add("S", 1).add("T", 2).add("CRK", (0, 2), 3).add("RY", 1, 0.4).add("CP", (1, 0), 0.9)
    u = sv.circuit_unitary(c) @ sv.circuit_unitary(c.inverse())
    assert np.allclose(u, np.eye(8), atol=1e-12)


def test_circuit_add_validates():
    c = sv.Circuit(2)
    with pytest.raises(ValueError):
        c.add("FOO", 0)
    with pytest.raises(ValueError):
        c.add("RX", 0)
    with pytest.raises(ValueError):
        c.add("CNOT", (0, 2))
