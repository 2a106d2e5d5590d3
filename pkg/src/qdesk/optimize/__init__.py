"""Ising/QUBO encodings and the annealing, QAOA and VQE solvers built on them."""

from .anneal import (
    AnnealSchedule,
    GapScan,
    anneal_evolve,
    gap_scan,
    ising_terms,
    qa_to_qaoa_angles,
    time_to_solution,
    transverse_field,
)
from .optimizer import MinimizeResult, OptimizerConfig, multistart_minimize
from .problems import (
    GroundResult,
    IsingProblem,
    QuboProblem,
    brute_force_ground,
    encode_maxcut,
    encode_number_partition,
    encode_subset_sum,
    ising_to_qubo,
    qubo_to_ising,
)
from .qaoa import (
    QaoaParams,
    QaoaResult,
    compile_qaoa_circuit,
    qaoa_expectation,
    qaoa_optimize,
    qaoa_state,
    sampled_expectation,
)
from .routing import SwapNetwork, swap_network_linear
from .vqe import VqeProblem, VqeResult, ansatz_circuit, hamiltonian_matrix, parse_hamiltonian, vqe_energy, vqe_optimize

__all__ = [
    "AnnealSchedule", "GapScan", "anneal_evolve", "gap_scan", "ising_terms", "qa_to_qaoa_angles",
    "time_to_solution", "transverse_field", "MinimizeResult", "OptimizerConfig", "multistart_minimize",
    "GroundResult", "IsingProblem", "QuboProblem", "brute_force_ground", "encode_maxcut",
    "encode_number_partition", "encode_subset_sum", "ising_to_qubo", "qubo_to_ising", "QaoaParams",
    "QaoaResult", "compile_qaoa_circuit", "qaoa_expectation", "qaoa_optimize", "qaoa_state",
    "sampled_expectation", "SwapNetwork", "swap_network_linear", "VqeProblem", "VqeResult",
    "ansatz_circuit", "hamiltonian_matrix", "parse_hamiltonian", "vqe_energy", "vqe_optimize",
]
