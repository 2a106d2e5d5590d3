import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdesk import mbqc
from qdesk import statevec as sv
from qdesk.clifford import PauliString

from conftest import random_state

angles = st.floats(-np.pi, np.pi)


def paulis_1q():
    return [PauliString.from_label(s).to_matrix() for s in "IXYZ"]


def test_graph_validation():
    with pytest.raises(ValueError):
        mbqc.ClusterGraph(2, ((0, 2),))
    with pytest.raises(ValueError):
        mbqc.ClusterGraph(2, ((0, 0),))
    with pytest.raises(ValueError):
        mbqc.ClusterGraph(2, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        mbqc.ClusterGraph(2, ((0, 1),), (1, 1))


def test_build_cluster_input_count():
    with pytest.raises(ValueError):
        mbqc.build_cluster(mbqc.ClusterGraph.linear(3, (0,)))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_graph_state_nullifiers(n, seed):
    rng = np.random.default_rng(seed)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5]
    g = mbqc.ClusterGraph(n, tuple(edges))
    state = mbqc.build_cluster(g)
    for k in mbqc.nullifiers(g):
        assert sv.expectation_pauli(state, k) == pytest.approx(1.0, abs=1e-12)


def test_inputs_are_placed_on_their_nodes(rng):
    psi = random_state(1, rng)
    g = mbqc.ClusterGraph(3, (), (2,))
    state = mbqc.build_cluster(g, [psi])
    expected = sv.QState.plus(2).tensor(psi)
    assert sv.states_equal(state, expected)


@pytest.mark.parametrize("m", [0, 1])
@settings(max_examples=15, deadline=None)
@given(phi=angles, seed=st.integers(0, 2**32 - 1))
def test_teleport_step(m, phi, seed):
    psi = random_state(1, np.random.default_rng(seed))
    out, got = mbqc.teleport_step(psi, phi, forced=m)
    x = sv.X.matrix if m else np.eye(2)
    expected = x @ sv.H.matrix @ sv.rz(-phi).matrix @ psi.amplitudes
    assert got == m
    assert sv.equal_up_to_phase(out.amplitudes, expected, 1e-9)


@settings(max_examples=25, deadline=None)
@given(angles, angles, angles, st.integers(0, 2**32 - 1))
def test_single_qubit_gadget_all_branches(alpha, beta, gamma, seed):
    psi = random_state(1, np.random.default_rng(seed))
    target = sv.QState(1, mbqc.single_qubit_target(alpha, beta, gamma) @ psi.amplitudes)
    for forced in itertools.product((0, 1), repeat=3):
        out, rec = mbqc.mbqc_single_qubit(psi, alpha, beta, gamma, forced=forced)
        assert rec.outcomes == forced
        assert sv.states_equal(mbqc.apply_corrections(out, rec), target)


def test_byproduct_record_is_pauli_frame(rng):
    psi = random_state(1, rng)
    out, rec = mbqc.mbqc_single_qubit(psi, 0.3, 1.1, -0.7, forced=(1, 1, 0))
    assert (rec.x, rec.z, rec.output_nodes) == ((1,), (1,), (3,))
    assert rec.angles == pytest.approx((-0.3, 1.1, -0.7))


def test_zero_angles_give_hadamard(rng):
    psi = random_state(1, rng)
    out, rec = mbqc.mbqc_single_qubit(psi, 0, 0, 0, rng)
    assert sv.states_equal(mbqc.apply_corrections(out, rec), sv.apply_gate(psi, sv.H, 0))


def test_random_outcomes_are_fair():
    rng = np.random.default_rng(5)
    psi = sv.QState.zero(1)
    outcomes = np.array([mbqc.mbqc_single_qubit(psi, 0.4, 0.9, 0.2, rng)[1].outcomes for _ in range(2000)])
    assert np.allclose(outcomes.mean(axis=0), 0.5, atol=0.05)


def test_clifford_angles_need_no_feedforward(rng):
    """With angles in multiples of pi/2 the unadapted output differs from the target by a Pauli."""
    psi = random_state(1, rng)
    target = mbqc.single_qubit_target(np.pi / 2, np.pi / 2, 0.0) @ psi.amplitudes
    for forced in itertools.product((0, 1), repeat=3):
        out, _ = mbqc.mbqc_single_qubit(psi, np.pi / 2, np.pi / 2, 0.0, forced=forced, adaptive=False)
        assert any(sv.equal_up_to_phase(p @ out.amplitudes, target, 1e-9) for p in paulis_1q())


def test_non_clifford_angles_need_feedforward(rng):
    psi = random_state(1, rng)
    target = mbqc.single_qubit_target(0.2, 0.7, 0.0) @ psi.amplitudes
    out, _ = mbqc.mbqc_single_qubit(psi, 0.2, 0.7, 0.0, forced=(1, 0, 0), adaptive=False)
    assert not any(sv.equal_up_to_phase(p @ out.amplitudes, target, 1e-6) for p in paulis_1q())


def test_cnot_gadget_all_branches(rng):
    psi = random_state(2, rng)
    target = sv.apply_gate(psi, sv.CNOT, (0, 1))
    for forced in itertools.product((0, 1), repeat=2):
        out, rec = mbqc.mbqc_cnot(psi, forced=forced)
        assert rec.outcomes == forced
        assert sv.states_equal(mbqc.apply_corrections(out, rec), target)


def test_commuting_measurements_commute(rng):
    """Measuring two cluster nodes in either order gives the same branch state."""
    g = mbqc.ClusterGraph.linear(4, (0,))
    state = mbqc.build_cluster(g, [random_state(1, rng)])
    for m1, m2 in itertools.product((0, 1), repeat=2):
        _, a = mbqc.measure_rotated(state, 0, 0.4, forced=m1)
        _, a = mbqc.measure_rotated(a, 2, -1.3, forced=m2)
        _, b = mbqc.measure_rotated(state, 2, -1.3, forced=m2)
        _, b = mbqc.measure_rotated(b, 0, 0.4, forced=m1)
        assert sv.states_equal(a, b)


def test_measure_rotated_eigenstates():
    plus_phi, minus_phi = mbqc.rotated_basis(0.8)
    sigma = np.cos(0.8) * sv.X.matrix + np.sin(0.8) * sv.Y.matrix
    assert np.allclose(sigma @ plus_phi, plus_phi)
    assert np.allclose(sigma @ minus_phi, -minus_phi)
    m, post = mbqc.measure_rotated(sv.QState.from_amplitudes(plus_phi), 0, 0.8, np.random.default_rng(0))
    assert m == 0 and sv.states_equal(post, sv.QState.from_amplitudes(plus_phi))


def test_measurement_needs_rng_or_forced():
    with pytest.raises(ValueError):
        mbqc.measure_rotated(sv.QState.zero(1), 0, 0.0)
    with pytest.raises(ValueError):
        mbqc.measure_rotated(sv.QState.zero(1), 0, 0.0, forced=2)


def test_gadget_input_sizes():
    with pytest.raises(ValueError):
        mbqc.mbqc_single_qubit(sv.QState.zero(2), 0, 0, 0, forced=(0, 0, 0))
    with pytest.raises(ValueError):
        mbqc.mbqc_cnot(sv.QState.zero(1), forced=(0, 0))
    with pytest.raises(ValueError):
        mbqc.teleport_step(sv.QState.zero(2), 0.0, forced=0)
