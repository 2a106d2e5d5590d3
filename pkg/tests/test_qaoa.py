import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from qdesk import statevec as sv
from qdesk.errors import CapExceededError
from qdesk.optimize import (
    IsingProblem,
    OptimizerConfig,
    QaoaParams,
    compile_qaoa_circuit,
    encode_maxcut,
    encode_number_partition,
    qaoa_expectation,
    qaoa_optimize,
    qaoa_state,
    sampled_expectation,
)

FAST = OptimizerConfig(restarts=4)


def random_problem(n, rng):
    return IsingProblem(np.triu(rng.normal(size=(n, n)), 1), rng.normal(size=n), rng.normal())


def dense_qaoa(p, params):
    n = p.n
    c = np.diag(p.energies())
    b = sum(sv.embed(sv.X.matrix, [q], n) for q in range(n))
    psi = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    for g, beta in zip(params.gammas, params.betas):
        psi = expm(-1j * beta * b) @ (expm(-1j * g * c) @ psi)
    return psi


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_state_matches_matrix_exponentials(n, depth, seed):
    rng = np.random.default_rng(seed)
    p = random_problem(n, rng)
    params = QaoaParams(tuple(rng.uniform(-3, 3, depth)), tuple(rng.uniform(-3, 3, depth)))
    assert np.allclose(qaoa_state(p, params).amplitudes, dense_qaoa(p, params), atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_compiled_circuit_matches_state(n, seed):
    rng = np.random.default_rng(seed)
    p = random_problem(n, rng)
    params = QaoaParams(tuple(rng.uniform(-3, 3, 2)), tuple(rng.uniform(-3, 3, 2)))
    c = compile_qaoa_circuit(p, params)
    assert set(op.name for op in c.ops) <= {"H", "RX", "RZ", "CZ"}
    assert sv.states_equal(sv.run_circuit(c), qaoa_state(p, params))


def test_params_shape():
    params = QaoaParams.from_vector([0.1, 0.2, 0.3, 0.4])
    assert params.p == 2
    assert params.gammas == (0.1, 0.2) and params.betas == (0.3, 0.4)
    with pytest.raises(ValueError):
        QaoaParams((0.1,), (0.2, 0.3))
    with pytest.raises(ValueError):
        QaoaParams.from_vector([1, 2, 3])


@settings(max_examples=20, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2**32 - 1))
def test_periodicity_for_integer_costs(gamma, beta, seed):
    rng = np.random.default_rng(seed)
    p = encode_number_partition(rng.integers(1, 5, size=3))
    params = QaoaParams((gamma,), (beta,))
    ref = qaoa_expectation(p, params)
    assert qaoa_expectation(p, params.wrapped()) == pytest.approx(ref, abs=1e-8)
    assert qaoa_expectation(p, QaoaParams((gamma,), (beta + np.pi,))) == pytest.approx(ref, abs=1e-8)


def test_padding_keeps_state(rng):
    p = random_problem(3, rng)
    params = QaoaParams((0.4,), (1.1,))
    assert sv.states_equal(qaoa_state(p, params), qaoa_state(p, params.padded()))


def test_zero_angles_give_uniform_average(rng):
    p = random_problem(3, rng)
    assert qaoa_expectation(p, QaoaParams((0.0,), (0.0,))) == pytest.approx(p.energies().mean())


def test_shot_estimate_is_unbiased(rng):
    p = random_problem(4, rng)
    params = QaoaParams((0.7, 0.2), (0.3, 1.4))
    exact = qaoa_expectation(p, params)
    mean, se = sampled_expectation(p, params, 20000, rng)
    assert abs(mean - exact) < 5 * se


def test_single_edge_maxcut_is_solved(rng):
    res = qaoa_optimize(encode_maxcut([(0, 1)]), 1, FAST, rng)
    assert res.expectation == pytest.approx(1.0, abs=1e-6)
    assert res.success_probability == pytest.approx(1.0, abs=1e-6)
    assert res.best_bitstring in ("01", "10")
    assert res.approximation_ratio == pytest.approx(1.0)


def test_ring_of_four_depth_one(rng):
    """p = 1 on the 4-cycle reaches 3/4 of the maximum cut."""
    res = qaoa_optimize(encode_maxcut([(0, 1), (1, 2), (2, 3), (3, 0)]), 1, FAST, rng)
    assert res.expectation == pytest.approx(3.0, abs=1e-5)
    assert res.optimum == pytest.approx(4.0)


def test_minimize_sense_lowers_energy(rng):
    p = encode_number_partition([1, 2, 3])
    res = qaoa_optimize(p, 2, FAST, rng)
    assert res.expectation < p.energies().mean()
    assert res.optimum == pytest.approx(0.0)
    assert res.approximation_ratio is None


def test_sense_is_respected_by_negation(rng):
    p = encode_maxcut([(0, 1), (1, 2)])
    a = qaoa_optimize(p, 1, FAST, np.random.default_rng(1))
    b = qaoa_optimize(p.negated(), 1, FAST, np.random.default_rng(1))
    assert a.expectation == pytest.approx(-b.expectation, abs=1e-6)


def test_warm_start_never_worse(rng):
    p = encode_maxcut([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    shallow = qaoa_optimize(p, 1, FAST, rng)
    deep = qaoa_optimize(p, 2, OptimizerConfig(restarts=1), rng, warm_start=shallow.params)
    assert deep.expectation >= shallow.expectation - 1e-9


def test_optimize_validation(rng):
    p = encode_maxcut([(0, 1)])
    with pytest.raises(ValueError):
        qaoa_optimize(p, 0, FAST, rng)
    with pytest.raises(ValueError):
        qaoa_optimize(p, 1, FAST, None)
    with pytest.raises(ValueError):
        qaoa_optimize(p, 1, FAST, rng, warm_start=QaoaParams((0, 0), (0, 0)))
    with pytest.raises(CapExceededError):
        qaoa_optimize(p, 1, FAST, rng, max_qubits=1)
