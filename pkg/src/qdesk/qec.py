"""Small stabilizer codes: encoding, projective syndrome measurement, lookup decoding.

Codes are plain data. A code carries its generators, logical operators, an
encoder circuit (data on qubit 0, the rest starting in |0>) and an ordered list
of correctable errors; the decoder table maps each syndrome to the first
listed error that produces it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import statevec as sv
from .clifford import PauliString, stabilizer_group
from .errors import UnknownSyndromeError

FAILURE_TOL = 1e-6
_DETERMINISTIC_TOL = 1e-12


def syndrome_of(generators: Sequence[PauliString], error: PauliString) -> tuple[int, ...]:
    """+1 for each generator commuting with ``error``, -1 otherwise."""
    return tuple(1 if g.commutes(error) else -1 for g in generators)


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    k: int
    d: int
    stabilizer_generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    encoder: sv.Circuit
    correctable: tuple[PauliString, ...]
    table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = self.stabilizer_generators
        if len(gens) != self.n - self.k:
            raise ValueError(f"{self.name}: expected {self.n - self.k} generators, got {len(gens)}")
        for p in (*gens, self.logical_x, self.logical_z, *self.correctable):
            if p.n != self.n:
                raise ValueError(f"{self.name}: operator {p.label()} has the wrong size")
        for a, b in itertools.combinations(gens, 2):
            if not a.commutes(b):
                raise ValueError(f"{self.name}: generators {a.label()} and {b.label()} anticommute")
        for logical in (self.logical_x, self.logical_z):
            if not all(logical.commutes(g) for g in gens):
                raise ValueError(f"{self.name}: logical {logical.label()} leaves the code space")
        if self.logical_x.commutes(self.logical_z):
            raise ValueError(f"{self.name}: logical X and Z must anticommute")
        table = {}
        for e in self.correctable:
            table.setdefault(syndrome_of(gens, e), e)
        object.__setattr__(self, "table", table)


def _code(name, n, d, gens, lx, lz, encoder, correctable) -> StabilizerCode:
    return StabilizerCode(
        name, n, 1, d,
        tuple(PauliString.from_label(g) for g in gens),
        PauliString.from_label(lx),
        PauliString.from_label(lz),
        encoder,
        tuple(correctable),
    )


def _singles(n: int, letter: str) -> list[PauliString]:
    return [PauliString.identity(n)] + [PauliString.single(n, q, letter) for q in range(n)]


def bit_flip_code() -> StabilizerCode:
    enc = sv.Circuit(3).add("CNOT", (0, 1)).add("CNOT", (0, 2))
    # a single Z already flips the logical state, so the distance against all Paulis is 1
    return _code("bitflip", 3, 1, ["ZZI", "IZZ"], "XXX", "ZZZ", enc, _singles(3, "X"))


def phase_flip_code() -> StabilizerCode:
    enc = sv.Circuit(3).add("CNOT", (0, 1)).add("CNOT", (0, 2))
    for q in range(3):
        enc.add("H", q)
    return _code("phaseflip", 3, 1, ["XXI", "IXX"], "ZZZ", "XXX", enc, _singles(3, "Z"))


def shor_code() -> StabilizerCode:
    enc = sv.Circuit(9).add("CNOT", (0, 3)).add("CNOT", (0, 6))
    for q in (0, 3, 6):
        enc.add("H", q)
    for q in (0, 3, 6):
        enc.add("CNOT", (q, q + 1)).add("CNOT", (q, q + 2))
    gens = ["ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ",
            "XXXXXXIII", "IIIXXXXXX"]
    blocks = [PauliString.identity(9)] + [
        PauliString.from_ops(9, {3 * b: "Z", 3 * b + 1: "Z", 3 * b + 2: "Z"}) for b in range(3)
    ]
    correctable = [z * x for x in _singles(9, "X") for z in blocks]
    return _code("shor9", 9, 3, gens, "ZZZZZZZZZ", "XXXXXXXXX", enc, correctable)


CODES = {"bitflip": bit_flip_code, "phaseflip": phase_flip_code, "shor9": shor_code}


def get_code(name: str) -> StabilizerCode:
    try:
        return CODES[name]()
    except KeyError:
        raise ValueError(f"unknown code {name!r}; choose from {sorted(CODES)}") from None


# ---------------------------------------------------------------------------
# encoding and measurement


def encode(code: StabilizerCode, alpha: complex, beta: complex) -> sv.QState:
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1) > sv.NORM_TOL:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {norm}, expected 1")
    data = sv.QState.from_amplitudes([alpha, beta])
    return sv.run_circuit(code.encoder, data.tensor(sv.QState.zero(code.n - 1)))


def measure_observable(
    state: sv.QState,
    observable: PauliString,
    rng: np.random.Generator | None = None,
    *,
    forced: int | None = None,
) -> tuple[int, sv.QState]:
    """Projective measurement of a Hermitian Pauli via the projectors (I +- G)/2.

    Without ``rng`` the outcome must be deterministic.
    """
    if not observable.is_hermitian:
        raise ValueError(f"{observable.label()} is not Hermitian")
    n = state.num_qubits
    amps = state.amplitudes
    g_amps = sv.apply_pauli_amps(amps, n, observable)
    branches = {s: (amps + s * g_amps) / 2 for s in (1, -1)}
    probs = {s: float(np.vdot(v, v).real) for s, v in branches.items()}
    if forced is not None:
        outcome = forced
        if outcome not in (1, -1):
            raise ValueError("forced outcome must be +1 or -1")
    elif probs[-1] < _DETERMINISTIC_TOL:
        outcome = 1
    elif probs[1] < _DETERMINISTIC_TOL:
        outcome = -1
    elif rng is None:
        raise ValueError(f"outcome of {observable.label()} is random; pass an rng")
    else:
        outcome = 1 if rng.random() < probs[1] else -1
    if probs[outcome] < _DETERMINISTIC_TOL:
        raise ValueError(f"outcome {outcome:+d} has zero probability")
    return outcome, sv.QState(n, branches[outcome] / np.sqrt(probs[outcome]))


def syndrome_extract(
    code: StabilizerCode, state: sv.QState, rng: np.random.Generator | None = None
) -> tuple[tuple[int, ...], sv.QState]:
    """Measure every generator in order, returning the +-1 syndrome and the post-state."""
    if state.num_qubits != code.n:
        raise ValueError(f"{code.name} acts on {code.n} qubits, state has {state.num_qubits}")
    outcomes = []
    for g in code.stabilizer_generators:
        s, state = measure_observable(state, g, rng)
        outcomes.append(s)
    return tuple(outcomes), state


def recover(code: StabilizerCode, syndrome: Sequence[int]) -> PauliString:
    syndrome = tuple(int(s) for s in syndrome)
    if len(syndrome) != len(code.stabilizer_generators):
        raise ValueError("syndrome length does not match the generator count")
    try:
        return code.table[syndrome]
    except KeyError:
        raise UnknownSyndromeError(f"{code.name}: no correction for syndrome {syndrome}") from None


def _apply_error(state: sv.QState, error) -> sv.QState:
    if isinstance(error, PauliString):
        return sv.apply_pauli(state, error)
    gate, qubit = error
    return sv.apply_gate(state, gate, qubit)


def correct_cycle(
    code: StabilizerCode,
    state: sv.QState,
    error: PauliString | tuple[sv.GateSpec, int],
    rng: np.random.Generator | None = None,
) -> sv.QState:
    """Apply ``error``, measure the syndrome, and undo the decoded correction.

    ``error`` is a Pauli string on at most one qubit or a pair (single-qubit gate,
    qubit), e.g. ``(rx(0.7), 2)``. A coherent rotation makes the syndrome random,
    so it needs an ``rng``.
    """
    if isinstance(error, PauliString):
        if error.weight > 1:
            raise ValueError(f"error {error.label()} acts on more than one qubit")
    elif error[0].arity != 1:
        raise ValueError("rotation errors must be single-qubit gates")
    syndrome, post = syndrome_extract(code, _apply_error(state, error), rng)
    return sv.apply_pauli(post, recover(code, syndrome))


# ---------------------------------------------------------------------------
# noise and logical error rates

_PAULI_CODES = "IXYZ"


@dataclass(frozen=True)
class PauliErrorModel:
    p: float
    kind: str = "bitflip"

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("error probability must lie in [0, 1]")
        if self.kind not in ("bitflip", "phaseflip", "depolarizing"):
            raise ValueError(f"unknown error kind {self.kind!r}")

    @property
    def letter_probs(self) -> np.ndarray:
        """Probabilities of I, X, Y, Z on one qubit."""
        p = self.p
        return {
            "bitflip": np.array([1 - p, p, 0, 0]),
            "phaseflip": np.array([1 - p, 0, 0, p]),
            "depolarizing": np.array([1 - p, p / 3, p / 3, p / 3]),
        }[self.kind]

    def sample(self, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
        """Integer codes (0=I, 1=X, 2=Y, 3=Z) of shape (trials, n)."""
        return rng.choice(4, size=(trials, n), p=self.letter_probs)


def pauli_from_codes(codes: Sequence[int]) -> PauliString:
    return PauliString.from_label("".join(_PAULI_CODES[int(c)] for c in codes))


def is_logical_failure(code: StabilizerCode, error: PauliString, strict: bool = False) -> bool:
    """Decide failure by Pauli algebra: the residual must commute with both logicals."""
    try:
        correction = recover(code, syndrome_of(code.stabilizer_generators, error))
    except UnknownSyndromeError:
        if strict:
            raise
        return True
    residual = correction * error
    return not (residual.commutes(code.logical_x) and residual.commutes(code.logical_z))


# a fixed input with unequal, complex weights so no logical error can hide
_PROBE = (np.sqrt(0.3), np.sqrt(0.7) * np.exp(0.4j))


def statevector_failure(code: StabilizerCode, error: PauliString, encoded: sv.QState | None = None) -> bool:
    """Run a full correction cycle on the statevector and compare with the encoded input."""
    encoded = encode(code, *_PROBE) if encoded is None else encoded
    syndrome, post = syndrome_extract(code, sv.apply_pauli(encoded, error))
    try:
        out = sv.apply_pauli(post, recover(code, syndrome))
    except UnknownSyndromeError:
        return True
    return sv.fidelity(out, encoded) < 1 - FAILURE_TOL


@dataclass(frozen=True)
class RateEstimate:
    rate: float
    stderr: float
    failures: int
    trials: int


def logical_error_rate(
    code: StabilizerCode, model: PauliErrorModel, trials: int, rng: np.random.Generator
) -> RateEstimate:
    """Monte-Carlo logical failure rate with its binomial standard error.

    Each distinct error pattern is simulated once on the statevector; patterns
    repeat heavily at small p.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    samples = model.sample(code.n, trials, rng)
    patterns, counts = np.unique(samples, axis=0, return_counts=True)
    encoded = encode(code, *_PROBE)
    failures = 0
    for pattern, count in zip(patterns, counts):
        if not pattern.any():
            continue
        if statevector_failure(code, pauli_from_codes(pattern), encoded):
            failures += int(count)
    rate = failures / trials
    return RateEstimate(rate, float(np.sqrt(rate * (1 - rate) / trials)), failures, trials)


def exact_logical_error_rate(code: StabilizerCode, model: PauliErrorModel) -> float:
    """Sum the probabilities of all failing error patterns (full enumeration)."""
    probs = model.letter_probs
    letters = np.flatnonzero(probs)
    total = 0.0
    for pattern in itertools.product(letters, repeat=code.n):
        weight = float(np.prod(probs[list(pattern)]))
        if weight and is_logical_failure(code, pauli_from_codes(pattern)):
            total += weight
    return total


def knill_laflamme_holds(code: StabilizerCode, errors: Sequence[PauliString]) -> bool:
    """Every product E_j^dagger E_k anticommutes with a generator or lies in the stabilizer group (up to phase)."""
    group = {s.unsigned() for s in stabilizer_group(code.stabilizer_generators)}
    for a in errors:
        for b in errors:
            prod = a * b  # Paulis are self-inverse up to phase
            if all(prod.commutes(g) for g in code.stabilizer_generators) and prod.unsigned() not in group:
                return False
    return True
