"""Dense statevector simulation.

Basis convention: qubit 0 is the leftmost ket factor and the most significant
bit of the basis index, so ``|j1 j2 ... jn>`` has index ``j1*2**(n-1) + ... + jn``.
Every other module inherits this ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceededError

MAX_QUBITS = 26
NORM_TOL = 1e-9
UNITARY_TOL = 1e-12


# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True, eq=False)
class QState:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.num_qubits < 1:
            raise ValueError("a state needs at least one qubit")
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amps, *, normalize: bool = False, max_qubits: int = MAX_QUBITS):
        amps = np.asarray(amps, dtype=np.complex128).ravel()
        n = int(round(math.log2(amps.size))) if amps.size else 0
        if amps.size != 2**n or n < 1:
            raise ValueError(f"amplitude count {amps.size} is not a power of two >= 2")
        _check_cap(n, max_qubits)
        if normalize:
            nrm = np.linalg.norm(amps)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / nrm
        return cls(n, amps)

    @classmethod
    def zero(cls, n: int, *, max_qubits: int = MAX_QUBITS) -> "QState":
        return cls.basis(0, n, max_qubits=max_qubits)

    @classmethod
    def basis(cls, index: int | str, n: int | None = None, *, max_qubits: int = MAX_QUBITS) -> "QState":
        """Computational basis state from an integer index or a bitstring like ``"101"``."""
        if isinstance(index, str):
            n = len(index) if n is None else n
            index = int(index, 2)
        if n is None:
            raise ValueError("n is required for an integer index")
        _check_cap(n, max_qubits)
        if not 0 <= index < 2**n:
            raise ValueError(f"basis index {index} out of range for {n} qubits")
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def plus(cls, n: int, *, max_qubits: int = MAX_QUBITS) -> "QState":
        _check_cap(n, max_qubits)
        return cls(n, np.full(2**n, 2 ** (-n / 2), dtype=np.complex128))

    @classmethod
    def product(cls, factors: Sequence["QState"]) -> "QState":
        out = factors[0]
        for f in factors[1:]:
            out = out.tensor(f)
        return out

    def tensor(self, other: "QState") -> "QState":
        return QState(self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "QState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "QState") -> float:
        return fidelity(self, other)

    def __repr__(self):
        return f"QState(num_qubits={self.num_qubits})"


def _check_cap(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise CapExceededError(f"{n} qubits exceeds the cap of {max_qubits}")


def fidelity(a: QState | np.ndarray, b: QState | np.ndarray) -> float:
    """|<a|b>|^2. Global phase is ignored by construction."""
    va = a.amplitudes if isinstance(a, QState) else np.asarray(a)
    vb = b.amplitudes if isinstance(b, QState) else np.asarray(b)
    return float(abs(np.vdot(va, vb)) ** 2)


def states_equal(a: QState, b: QState, tol: float = 1e-9) -> bool:
    return a.num_qubits == b.num_qubits and fidelity(a, b) >= 1 - tol


# ---------------------------------------------------------------------------
# gates


@dataclass(frozen=True, eq=False)
class GateSpec:
    name: str
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4, 8):
            raise ValueError(f"gate {self.name}: matrix must be 2^k x 2^k with k in 1..3")
        err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if err >= UNITARY_TOL:
            raise ValueError(f"gate {self.name} is not unitary (deviation {err:.2e})")
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def dagger(self) -> "GateSpec":
        return GateSpec(self.name + "DG", self.matrix.conj().T)


_SQ2 = 1 / math.sqrt(2)

I = GateSpec("I", np.eye(2))
X = GateSpec("X", [[0, 1], [1, 0]])
Y = GateSpec("Y", [[0, -1j], [1j, 0]])
Z = GateSpec("Z", [[1, 0], [0, -1]])
H = GateSpec("H", [[_SQ2, _SQ2], [_SQ2, -_SQ2]])
S = GateSpec("S", [[1, 0], [0, 1j]])
SDG = GateSpec("SDG", [[1, 0], [0, -1j]])
T = GateSpec("T", [[1, 0], [0, np.exp(1j * math.pi / 4)]])
TDG = GateSpec("TDG", [[1, 0], [0, np.exp(-1j * math.pi / 4)]])


def rx(theta: float) -> GateSpec:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return GateSpec("RX", [[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> GateSpec:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return GateSpec("RY", [[c, -s], [s, c]])


def rz(theta: float) -> GateSpec:
    return GateSpec("RZ", np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]))


def phase(theta: float) -> GateSpec:
    return GateSpec("P", np.diag([1.0, np.exp(1j * theta)]))


def rk(k: int) -> GateSpec:
    """R_k = diag(1, exp(2 pi i / 2**k)); negative k gives the inverse."""
    sign = 1 if k > 0 else -1
    return GateSpec("RK", np.diag([1.0, np.exp(sign * 2j * math.pi / 2 ** abs(k))]))


def controlled(gate: GateSpec) -> GateSpec:
    """Block matrix diag(I, U) with the new control as the most significant qubit."""
    k = gate.arity
    if k + 1 > 3:
        raise ValueError("controlled gates are limited to 3 qubits")
    dim = 2**k
    m = np.eye(2 * dim, dtype=np.complex128)
    m[dim:, dim:] = gate.matrix
    return GateSpec("C" + gate.name, m)


CNOT = GateSpec("CNOT", controlled(X).matrix)
CZ = GateSpec("CZ", np.diag([1, 1, 1, -1]))
SWAP = GateSpec("SWAP", [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
TOFFOLI = GateSpec("TOFFOLI", controlled(CNOT).matrix)
FREDKIN = GateSpec("FREDKIN", controlled(SWAP).matrix)
CCZ = GateSpec("CCZ", np.diag([1, 1, 1, 1, 1, 1, 1, -1]))
SQRTCZ = GateSpec("SQRTCZ", np.diag([1, 1, 1, 1j]))


def _fixed(g: GateSpec) -> Callable[[], GateSpec]:
    return lambda: g


# name -> (arity, parameter count, factory)
GATES: dict[str, tuple[int, int, Callable[..., GateSpec]]] = {
    "I": (1, 0, _fixed(I)),
    "X": (1, 0, _fixed(X)),
    "Y": (1, 0, _fixed(Y)),
    "Z": (1, 0, _fixed(Z)),
    "H": (1, 0, _fixed(H)),
    "S": (1, 0, _fixed(S)),
    "SDG": (1, 0, _fixed(SDG)),
    "T": (1, 0, _fixed(T)),
    "TDG": (1, 0, _fixed(TDG)),
    "RX": (1, 1, rx),
    "RY": (1, 1, ry),
    "RZ": (1, 1, rz),
    "P": (1, 1, phase),
    "RK": (1, 1, lambda k: rk(int(k))),
    "CNOT": (2, 0, _fixed(CNOT)),
    "CX": (2, 0, _fixed(CNOT)),
    "CZ": (2, 0, _fixed(CZ)),
    "SWAP": (2, 0, _fixed(SWAP)),
    "SQRTCZ": (2, 0, _fixed(SQRTCZ)),
    "CP": (2, 1, lambda t: controlled(phase(t))),
    "CRK": (2, 1, lambda k: controlled(rk(int(k)))),
    "TOFFOLI": (3, 0, _fixed(TOFFOLI)),
    "CCX": (3, 0, _fixed(TOFFOLI)),
    "CCZ": (3, 0, _fixed(CCZ)),
    "FREDKIN": (3, 0, _fixed(FREDKIN)),
    "CSWAP": (3, 0, _fixed(FREDKIN)),
}


def make_gate(name: str, *params: float) -> GateSpec:
    try:
        arity, nparams, factory = GATES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown gate {name!r}") from None
    if len(params) != nparams:
        raise ValueError(f"gate {name} takes {nparams} parameter(s), got {len(params)}")
    return factory(*params)


# ---------------------------------------------------------------------------
# kernels


def _apply_matrix(amps: np.ndarray, n: int, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply a k-qubit matrix to ``targets``; trailing axes of ``amps`` are batch axes."""
    k = len(targets)
    batch = amps.shape[1:]
    psi = amps.reshape((2,) * n + batch)
    u = matrix.reshape((2,) * (2 * k))
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(targets)))
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return np.ascontiguousarray(psi).reshape(amps.shape)


def _check_targets(n: int, targets: Sequence[int], arity: int | None = None) -> None:
    if arity is not None and len(targets) != arity:
        raise ValueError(f"expected {arity} target(s), got {len(targets)}")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {list(targets)}")
    for q in targets:
        if not 0 <= q < n:
            raise ValueError(f"target {q} out of range for {n} qubits")


def apply_gate(state: QState, gate: GateSpec, targets: Sequence[int] | int) -> QState:
    if isinstance(targets, (int, np.integer)):
        targets = [int(targets)]
    targets = list(targets)
    _check_targets(state.num_qubits, targets, gate.arity)
    amps = _apply_matrix(state.amplitudes, state.num_qubits, gate.matrix, targets)
    return QState(state.num_qubits, amps)


def apply_diagonal(state: QState, diag: np.ndarray) -> QState:
    return QState(state.num_qubits, state.amplitudes * diag)


def bit_of(indices: np.ndarray, q: int, n: int) -> np.ndarray:
    """Value of qubit ``q`` in each basis index."""
    return (indices >> (n - 1 - q)) & 1


# ---------------------------------------------------------------------------
# measurement


def measure_qubit(
    state: QState,
    q: int,
    rng: np.random.Generator | None = None,
    *,
    forced: int | None = None,
) -> tuple[int, QState]:
    """Computational-basis measurement of qubit ``q``.

    ``forced`` selects a branch deterministically (used to enumerate branches in
    tests); otherwise ``rng`` draws the outcome.
    """
    n = state.num_qubits
    _check_targets(n, [q])
    psi = state.amplitudes.reshape(2**q, 2, 2 ** (n - 1 - q))
    p1 = float(np.sum(np.abs(psi[:, 1, :]) ** 2))
    p1 = min(max(p1, 0.0), 1.0)
    if forced is None:
        if rng is None:
            raise ValueError("measure_qubit needs an rng unless an outcome is forced")
        bit = int(rng.random() < p1)
    else:
        bit = int(forced)
    prob = p1 if bit else 1.0 - p1
    if prob < 1e-15:
        raise ValueError(f"outcome {bit} on qubit {q} has zero probability")
    out = np.zeros_like(psi)
    out[:, bit, :] = psi[:, bit, :] / math.sqrt(prob)
    return bit, QState(n, out.reshape(-1))


def outcome_probability(state: QState, q: int, bit: int) -> float:
    n = state.num_qubits
    psi = state.amplitudes.reshape(2**q, 2, 2 ** (n - 1 - q))
    return float(np.sum(np.abs(psi[:, bit, :]) ** 2))


def project_out(state: QState, q: int, bra: np.ndarray) -> tuple[float, QState]:
    """Contract qubit ``q`` with the single-qubit ``bra`` vector (given as a ket).

    Returns the branch probability and the normalized (n-1)-qubit remainder.
    """
    n = state.num_qubits
    if n < 2:
        raise ValueError("cannot remove the only qubit")
    psi = state.amplitudes.reshape(2**q, 2, 2 ** (n - 1 - q))
    rest = np.einsum("i,aib->ab", np.conj(np.asarray(bra, dtype=np.complex128)), psi).reshape(-1)
    prob = float(np.vdot(rest, rest).real)
    if prob < 1e-15:
        raise ValueError("projection has zero probability")
    return prob, QState(n - 1, rest / math.sqrt(prob))


def sample_counts(state: QState, shots: int, rng: np.random.Generator) -> dict[str, int]:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    n = state.num_qubits
    return {format(int(i), f"0{n}b"): int(counts[i]) for i in np.flatnonzero(counts)}


# ---------------------------------------------------------------------------
# Pauli strings (duck-typed: anything with n, x, z, phase)


def _pauli_masks(p, n: int) -> tuple[int, int, int]:
    xm = zm = 0
    for q in range(n):
        if p.x[q]:
            xm |= 1 << (n - 1 - q)
        if p.z[q]:
            zm |= 1 << (n - 1 - q)
    # operator = i^phase * prod sigma(x, z) with sigma(1,1) = Y = i X Z
    ny = bin(xm & zm).count("1")
    return xm, zm, (int(p.phase) + ny) % 4


def apply_pauli_amps(amps: np.ndarray, n: int, p) -> np.ndarray:
    xm, zm, ph = _pauli_masks(p, n)
    idx = np.arange(2**n)
    parity = np.zeros(2**n, dtype=np.int64)
    v = idx & zm
    while np.any(v):
        parity ^= v & 1
        v = v >> 1
    signs = (1j**ph) * (1 - 2 * parity)
    out = np.empty_like(amps)
    out[idx ^ xm] = signs * amps
    return out


def apply_pauli(state: QState, p) -> QState:
    if p.n != state.num_qubits:
        raise ValueError("Pauli string size does not match the state")
    return QState(state.num_qubits, apply_pauli_amps(state.amplitudes, state.num_qubits, p))


def expectation_pauli(state: QState, p) -> float:
    if p.n != state.num_qubits:
        raise ValueError(f"Pauli string on {p.n} qubits, state has {state.num_qubits}")
    val = np.vdot(state.amplitudes, apply_pauli_amps(state.amplitudes, state.num_qubits, p))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"non-Hermitian observable (imaginary part {val.imag:.3e})")
    return float(val.real)


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class Op:
    name: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()

    def gate(self) -> GateSpec:
        return make_gate(self.name, *self.params)


@dataclass
class Circuit:
    num_qubits: int
    ops: list[Op] = field(default_factory=list)

    def add(self, name: str, targets: Iterable[int] | int, *params: float) -> "Circuit":
        if isinstance(targets, (int, np.integer)):
            targets = (int(targets),)
        targets = tuple(int(t) for t in targets)
        name = name.upper()
        if name not in GATES:
            raise ValueError(f"unknown gate {name!r}")
        arity, nparams, _ = GATES[name]
        if len(params) != nparams:
            raise ValueError(f"gate {name} takes {nparams} parameter(s), got {len(params)}")
        _check_targets(self.num_qubits, targets, arity)
        self.ops.append(Op(name, targets, tuple(float(p) for p in params)))
        return self

    def extend(self, other: "Circuit", offset: int = 0) -> "Circuit":
        for op in other.ops:
            self.add(op.name, [t + offset for t in op.targets], *op.params)
        return self

    def inverse(self) -> "Circuit":
        out = Circuit(self.num_qubits)
        for op in reversed(self.ops):
            out.ops.append(_inverse_op(op))
        return out

    def __len__(self):
        return len(self.ops)

    def count(self, name: str) -> int:
        return sum(op.name == name.upper() for op in self.ops)


_SELF_INVERSE = {"I", "X", "Y", "Z", "H", "CNOT", "CX", "CZ", "SWAP", "TOFFOLI", "CCX", "CCZ", "FREDKIN", "CSWAP"}
_DAGGER_NAME = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}


def _inverse_op(op: Op) -> Op:
    if op.name in _SELF_INVERSE:
        return op
    if op.name in _DAGGER_NAME:
        return Op(_DAGGER_NAME[op.name], op.targets)
    if op.name in ("RX", "RY", "RZ", "P", "CP", "RK", "CRK"):
        return Op(op.name, op.targets, (-op.params[0],))
    raise ValueError(f"no inverse rule for {op.name}")


def run_circuit(circuit: Circuit, state: QState | None = None) -> QState:
    if state is None:
        state = QState.zero(circuit.num_qubits)
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("circuit and state sizes differ")
    amps = run_circuit_amps(circuit, state.amplitudes)
    return QState(state.num_qubits, amps)


def run_circuit_amps(circuit: Circuit, amps: np.ndarray) -> np.ndarray:
    """Apply ``circuit`` to a raw amplitude array (trailing axes are batch axes)."""
    for op in circuit.ops:
        amps = _apply_matrix(amps, circuit.num_qubits, op.gate().matrix, op.targets)
    return amps


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    dim = 2**circuit.num_qubits
    return run_circuit_amps(circuit, np.eye(dim, dtype=np.complex128))


def embed(matrix: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix acting as ``matrix`` on ``targets``."""
    return _apply_matrix(np.eye(2**n, dtype=np.complex128), n, np.asarray(matrix, dtype=np.complex128), list(targets))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """Matrix equality modulo a global phase."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < tol:
        return bool(np.max(np.abs(a)) < tol)
    ph = a[k] / b[k]
    if abs(abs(ph) - 1) > 1e-8:
        return False
    return bool(np.max(np.abs(a - ph * b)) < tol)
