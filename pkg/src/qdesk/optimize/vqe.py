"""Hardware-efficient VQE over weighted Pauli-string Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import statevec as sv
from ..clifford import PauliString
from ..errors import CapExceededError
from .optimizer import OptimizerConfig, multistart_minimize

Terms = Sequence[tuple[float, PauliString]]


def hamiltonian_matrix(terms: Terms) -> np.ndarray:
    """Dense sum_a h_a P_a."""
    if not terms:
        raise ValueError("empty term list")
    n = terms[0][1].n
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for coef, p in terms:
        out += coef * p.to_matrix()
    return out


def parse_hamiltonian(text: str) -> list[tuple[float, PauliString]]:
    """Read lines of ``coefficient LABEL`` (e.g. ``0.5 XI``); ``#`` starts a comment."""
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'coefficient LABEL'")
        terms.append((float(parts[0]), PauliString.from_label(parts[1])))
    return terms


@dataclass(frozen=True)
class VqeProblem:
    """Hamiltonian terms plus the ansatz shape (``depth`` entangler repetitions)."""

    terms: tuple[tuple[float, PauliString], ...]
    depth: int = 1
    entangler: str = "line"
    n: int = field(init=False)

    def __post_init__(self):
        terms = tuple((float(c), p) for c, p in self.terms)
        if not terms:
            raise ValueError("empty term list")
        n = terms[0][1].n
        for _, p in terms:
            if p.n != n:
                raise ValueError("all Pauli strings must act on the same number of qubits")
            if not p.is_hermitian:
                raise ValueError(f"{p.label()} is not Hermitian")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.entangler not in ("line", "ring"):
            raise ValueError(f"unknown entangler {self.entangler!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "n", n)

    @property
    def num_params(self) -> int:
        return self.n * (3 * self.depth + 2)

    def entangling_pairs(self) -> list[tuple[int, int]]:
        pairs = [(q, q + 1) for q in range(self.n - 1)]
        if self.entangler == "ring" and self.n > 2:
            pairs.append((self.n - 1, 0))
        return pairs


def ansatz_circuit(prob: VqeProblem, theta: Sequence[float]) -> sv.Circuit:
    """RX, RZ on every qubit, then ``depth`` rounds of [CZ entangler, RZ RX RZ per qubit]."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (prob.num_params,):
        raise ValueError(f"expected {prob.num_params} parameters, got {theta.size}")
    n = prob.n
    c = sv.Circuit(n)
    it = iter(theta)
    for q in range(n):
        c.add("RX", q, next(it)).add("RZ", q, next(it))
    for _ in range(prob.depth):
        for a, b in prob.entangling_pairs():
            c.add("CZ", (a, b))
        for q in range(n):
            c.add("RZ", q, next(it)).add("RX", q, next(it)).add("RZ", q, next(it))
    return c


def vqe_energy(
    prob: VqeProblem,
    theta: Sequence[float],
    *,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
    max_qubits: int = sv.MAX_QUBITS,
) -> float:
    """sum_a h_a <P_a>; with ``shots``, each term is estimated from that many +-1 outcomes."""
    if prob.n > max_qubits:
        raise CapExceededError(f"{prob.n} qubits exceed the cap {max_qubits}")
    state = sv.run_circuit(ansatz_circuit(prob, theta))
    total = 0.0
    for coef, p in prob.terms:
        exp = sv.expectation_pauli(state, p)
        if shots is not None:
            if rng is None:
                raise ValueError("shot-noise mode needs an rng")
            plus = rng.binomial(shots, min(max((1 + exp) / 2, 0.0), 1.0))
            exp = (2 * plus - shots) / shots
        total += coef * exp
    return total


@dataclass
class VqeResult:
    energy: float
    params: np.ndarray
    converged: bool
    nfev: int


def vqe_optimize(
    prob: VqeProblem,
    config: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
    *,
    shots: int | None = None,
) -> VqeResult:
    if rng is None:
        raise ValueError("vqe_optimize needs an rng")
    config = OptimizerConfig(init_high=2 * np.pi) if config is None else config
    res = multistart_minimize(
        lambda th: vqe_energy(prob, th, shots=shots, rng=rng), prob.num_params, config, rng
    )
    energy = vqe_energy(prob, res.x) if shots is not None else res.fun
    return VqeResult(float(energy), res.x, res.converged, res.nfev)
