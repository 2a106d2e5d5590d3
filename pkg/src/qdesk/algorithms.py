"""Textbook algorithms on the statevector engine.

Oracles are explicit truth tables applied as diagonal (-1)**f(x) phase masks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import statevec as sv
from .errors import CapExceededError

MAX_ORACLE_BITS = 20


class Promise(str, enum.Enum):
    CONSTANT_OR_BALANCED = "constant-or-balanced"
    SINGLE_MARKED = "single-marked"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class BooleanOracle:
    """Truth table of f: {0,1}^n -> {0,1}, indexed by the integer value of x."""

    n: int
    table: np.ndarray = field(repr=False)
    promise: Promise = Promise.GENERAL

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORACLE_BITS:
            raise ValueError(f"oracle size must be in 1..{MAX_ORACLE_BITS}")
        table = np.asarray(self.table, dtype=np.uint8).ravel()
        if table.size != 2**self.n or np.any(table > 1):
            raise ValueError("truth table must hold 2**n bits")
        promise = Promise(self.promise)
        ones = int(table.sum())
        if promise is Promise.CONSTANT_OR_BALANCED and ones not in (0, table.size // 2, table.size):
            raise ValueError("function is neither constant nor balanced")
        if promise is Promise.SINGLE_MARKED and ones != 1:
            raise ValueError(f"expected exactly one marked item, found {ones}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "promise", promise)

    @classmethod
    def from_function(cls, n: int, f: Callable[[int], int], promise=Promise.GENERAL) -> "BooleanOracle":
        return cls(n, np.array([int(f(x)) & 1 for x in range(2**n)]), promise)

    @classmethod
    def marked(cls, n: int, x0: int | str) -> "BooleanOracle":
        if isinstance(x0, str):
            x0 = int(x0, 2)
        table = np.zeros(2**n, dtype=np.uint8)
        table[x0] = 1
        return cls(n, table, Promise.SINGLE_MARKED)

    @property
    def marked_items(self) -> np.ndarray:
        return np.flatnonzero(self.table)

    def phase_mask(self) -> np.ndarray:
        return 1.0 - 2.0 * self.table

    def bitflip_unitary(self) -> np.ndarray:
        """U_f |x>|y> = |x>|y xor f(x)> on n+1 qubits (ancilla last)."""
        dim = 2 ** (self.n + 1)
        u = np.zeros((dim, dim))
        for x in range(2**self.n):
            for y in (0, 1):
                u[2 * x + (y ^ int(self.table[x])), 2 * x + y] = 1.0
        return u


def mask_from_ancilla(oracle: BooleanOracle) -> np.ndarray:
    """Phase mask obtained by running the ancilla oracle on |x>|->.

    Compiles the bit-flip form to the diagonal used everywhere else.
    """
    u = oracle.bitflip_unitary()
    minus = np.array([1, -1]) / math.sqrt(2)
    mask = np.empty(2**oracle.n)
    for x in range(2**oracle.n):
        v = np.zeros(2**oracle.n)
        v[x] = 1.0
        out = u @ np.kron(v, minus)
        mask[x] = np.vdot(np.kron(v, minus), out).real
    return mask


# ---------------------------------------------------------------------------
# Deutsch-Jozsa


class DJResult(str, enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"


def deutsch_jozsa(oracle: BooleanOracle) -> DJResult:
    if oracle.promise is not Promise.CONSTANT_OR_BALANCED:
        oracle = BooleanOracle(oracle.n, oracle.table, Promise.CONSTANT_OR_BALANCED)
    n = oracle.n
    state = sv.QState.plus(n)
    state = sv.apply_diagonal(state, oracle.phase_mask())
    amps = state.amplitudes
    for q in range(n):
        amps = sv._apply_matrix(amps, n, sv.H.matrix, [q])
    p_zero = abs(amps[0]) ** 2
    return DJResult.CONSTANT if p_zero > 0.5 else DJResult.BALANCED


# ---------------------------------------------------------------------------
# Grover


def grover_angle(N: int, M: int) -> float:
    return 2 * math.asin(math.sqrt(M / N))


def grover_success_closed_form(N: int, M: int, k: int) -> float:
    return math.sin((k + 0.5) * grover_angle(N, M)) ** 2


def grover_iterations(N: int, M: int = 1) -> int:
    """Iteration count maximizing sin^2((k + 1/2) theta); ties go to the smaller k."""
    if not 1 <= M < N:
        raise ValueError("need 1 <= M < N")
    theta = grover_angle(N, M)
    k_max = int(math.ceil(math.pi / (2 * theta))) + 1
    best_k, best_p = 0, -1.0
    for k in range(k_max + 1):
        p = math.sin((k + 0.5) * theta) ** 2
        if p > best_p + 1e-12:
            best_k, best_p = k, p
    return best_k


def grover_state(n: int, oracle: BooleanOracle, k: int) -> sv.QState:
    if k < 0:
        raise ValueError("iteration count must be >= 0")
    if oracle.n != n:
        raise ValueError("oracle size does not match n")
    mask = oracle.phase_mask()
    psi = sv.QState.plus(n).amplitudes
    uniform = psi.copy()
    for _ in range(k):
        psi = psi * mask
        psi = 2 * np.vdot(uniform, psi) * uniform - psi
    return sv.QState(n, psi)


def grover_search(n: int, oracle: BooleanOracle, k: int, rng: np.random.Generator) -> tuple[str, float]:
    """Run k Grover iterations; returns (sampled bitstring, success probability)."""
    if oracle.promise is not Promise.SINGLE_MARKED:
        oracle = BooleanOracle(oracle.n, oracle.table, Promise.SINGLE_MARKED)
    state = grover_state(n, oracle, k)
    x0 = int(oracle.marked_items[0])
    p = float(abs(state.amplitudes[x0]) ** 2)
    probs = state.probabilities()
    idx = int(rng.choice(probs.size, p=probs / probs.sum()))
    return format(idx, f"0{n}b"), p


# ---------------------------------------------------------------------------
# QFT


def qft_circuit(n: int, inverse: bool = False) -> sv.Circuit:
    """H and controlled-R_k ladder followed by the qubit-reversal swaps."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = sv.Circuit(n)
    for j in range(n):
        c.add("H", j)
        for k in range(2, n - j + 1):
            c.add("CRK", (j + k - 1, j), k)
    for j in range(n // 2):
        c.add("SWAP", (j, n - 1 - j))
    return c.inverse() if inverse else c


def dft_matrix(n: int) -> np.ndarray:
    dim = 2**n
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)


# ---------------------------------------------------------------------------
# phase estimation


@dataclass(frozen=True)
class PhaseEstConfig:
    t: int
    n_bits: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.n_bits is not None and self.t < self.n_bits:
            raise ValueError("t must be at least the requested precision")

    @classmethod
    def from_precision(cls, n_bits: int, epsilon: float) -> "PhaseEstConfig":
        """Register size t = n + ceil(log2(2 + 1/(2 epsilon)))."""
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        return cls(n_bits + math.ceil(math.log2(2 + 1 / (2 * epsilon))), n_bits, epsilon)


@dataclass
class PhaseEstimate:
    t: int
    distribution: np.ndarray
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def mode(self) -> int:
        return int(np.argmax(self.distribution))

    @property
    def phase(self) -> float:
        return self.mode / 2**self.t


def _unitary_powers(u, t: int) -> list[np.ndarray]:
    if callable(u):
        return [np.asarray(u(j), dtype=np.complex128) for j in range(t)]
    u = np.asarray(u, dtype=np.complex128)
    powers = [u]
    for _ in range(t - 1):
        powers.append(powers[-1] @ powers[-1])
    return powers


def phase_estimate(
    u,
    eigenstate: sv.QState,
    config: PhaseEstConfig | int,
    shots: int = 0,
    rng: np.random.Generator | None = None,
    *,
    max_qubits: int = sv.MAX_QUBITS,
) -> PhaseEstimate:
    """Exact phase-estimation output distribution over k (estimate k / 2**t).

    ``u`` is either a dense unitary or a callable ``j -> U**(2**j)``. The counting
    register holds the t most significant qubits; counting qubit c controls
    ``U**(2**(t-1-c))``.
    """
    t = config.t if isinstance(config, PhaseEstConfig) else int(config)
    m = eigenstate.num_qubits
    if t + m > max_qubits:
        raise CapExceededError(f"phase estimation needs {t + m} qubits (cap {max_qubits})")
    powers = _unitary_powers(u, t)
    if powers[0].shape != (2**m, 2**m):
        raise ValueError("unitary does not match the eigenstate size")
    # state[j, :] is the system state attached to counting value j
    state = np.tile(eigenstate.amplitudes / math.sqrt(2**t), (2**t, 1))
    for c in range(t):
        view = state.reshape(2**c, 2, 2 ** (t - 1 - c), 2**m)
        view[:, 1] = view[:, 1] @ powers[t - 1 - c].T
    state = sv.run_circuit_amps(qft_circuit(t, inverse=True), state)
    dist = np.sum(np.abs(state) ** 2, axis=1)
    dist = dist / dist.sum()
    result = PhaseEstimate(t, dist)
    if shots:
        if rng is None:
            raise ValueError("sampling needs an rng")
        counts = rng.multinomial(shots, dist)
        result.counts = {int(k): int(counts[k]) for k in np.flatnonzero(counts)}
    return result


def phase_success_probability(dist: np.ndarray, phi: float, n_bits: int) -> float:
    """Mass within 2**(t-n) - 1 (circularly) of the best t-bit approximation below phi."""
    size = dist.size
    t = size.bit_length() - 1
    if n_bits > t:
        raise ValueError("precision exceeds the register size")
    b = int(math.floor(phi * size)) % size
    e = 2 ** (t - n_bits) - 1
    k = np.arange(size)
    d = np.minimum((k - b) % size, (b - k) % size)
    return float(dist[d <= e].sum())


# ---------------------------------------------------------------------------
# Hadamard test and swap test


def hadamard_test(q_circuit: sv.Circuit | np.ndarray, psi: sv.QState, imaginary: bool = False) -> tuple[float, float, float]:
    """Exact (p0, p1, p0 - p1) of the Hadamard test on ``psi``.

    p0 - p1 equals Re<psi|Q|psi>, or Im<psi|Q|psi> when ``imaginary`` is set
    (an S^dagger on the ancilla before the final Hadamard).
    """
    if isinstance(q_circuit, sv.Circuit):
        if q_circuit.num_qubits != psi.num_qubits:
            raise ValueError("circuit and state sizes differ")
        q_psi = sv.run_circuit(q_circuit, psi).amplitudes
    else:
        q = np.asarray(q_circuit)
        if q.shape != (2**psi.num_qubits,) * 2:
            raise ValueError("operator and state sizes differ")
        q_psi = q @ psi.amplitudes
    a0 = psi.amplitudes / math.sqrt(2)
    a1 = q_psi / math.sqrt(2)
    if imaginary:
        a1 = -1j * a1
    b0 = (a0 + a1) / math.sqrt(2)
    b1 = (a0 - a1) / math.sqrt(2)
    p0 = float(np.vdot(b0, b0).real)
    p1 = float(np.vdot(b1, b1).real)
    return p0, p1, p0 - p1


def swap_test(f: sv.QState, g: sv.QState) -> float:
    """Probability of reading 0 on the ancilla: (1 + |<f|g>|^2) / 2, simulated exactly."""
    if f.num_qubits != g.num_qubits:
        raise ValueError("swap test needs equal qubit counts")
    m = f.num_qubits
    n = 2 * m + 1
    if n > sv.MAX_QUBITS:
        raise CapExceededError("swap test register exceeds the cap")
    state = sv.QState.zero(1).tensor(f).tensor(g)
    amps = sv._apply_matrix(state.amplitudes, n, sv.H.matrix, [0])
    for i in range(m):
        amps = sv._apply_matrix(amps, n, sv.FREDKIN.matrix, [0, 1 + i, 1 + m + i])
    amps = sv._apply_matrix(amps, n, sv.H.matrix, [0])
    return sv.outcome_probability(sv.QState(n, amps), 0, 0)
