"""Pauli-string algebra and stabilizer-tableau simulation of Clifford circuits.

A Pauli string is stored as bit vectors ``x``, ``z`` and a phase exponent so
that the operator is ``i**phase * sigma(x_0, z_0) (x) ... (x) sigma(x_n-1, z_n-1)``
with ``sigma(1, 0) = X``, ``sigma(0, 1) = Z`` and ``sigma(1, 1) = Y``. Hermitian
strings therefore have ``phase in {0, 2}``.

The tableau keeps ``n`` destabilizer rows followed by ``n`` stabilizer rows,
which makes a measurement O(n^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import statevec as sv
from .errors import CapExceededError

_LETTERS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PREFIX = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}


def _g(x1, z1, x2, z2):
    """Exponent of i in sigma(x1, z1) * sigma(x2, z2) (Aaronson-Gottesman g)."""
    x1 = np.asarray(x1, dtype=np.int64)
    z1 = np.asarray(z1, dtype=np.int64)
    x2 = np.asarray(x2, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    return np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )


class PauliString:
    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, x: Sequence[int], z: Sequence[int], phase: int = 0):
        x = np.asarray(x, dtype=np.uint8).copy()
        z = np.asarray(z, dtype=np.uint8).copy()
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z must be equal-length bit vectors")
        x.flags.writeable = False
        z.flags.writeable = False
        self.n = int(x.size)
        self.x = x
        self.z = z
        self.phase = int(phase) % 4

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like ``"XYZ"``, ``"-ZZI"`` or ``"iX"``."""
        label = label.strip()
        body = label.lstrip("+-i")
        prefix = label[: len(label) - len(body)]
        if prefix not in _PREFIX:
            raise ValueError(f"bad phase prefix {prefix!r}")
        try:
            bits = [_LETTERS[c] for c in body.upper()]
        except KeyError as exc:
            raise ValueError(f"bad Pauli letter in {label!r}") from exc
        if not bits:
            raise ValueError("empty Pauli label")
        x, z = zip(*bits)
        return cls(x, z, _PREFIX[prefix])

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> "PauliString":
        return cls.from_ops(n, {q: letter})

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str], phase: int = 0) -> "PauliString":
        """Sparse constructor: ``from_ops(3, {0: "Z", 1: "Z"})`` is ``ZZI``."""
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for q, letter in ops.items():
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range")
            x[q], z[q] = _LETTERS[letter.upper()]
        return cls(x, z, phase)

    def label(self) -> str:
        body = "".join("IZXY"[2 * int(a) + int(b)] for a, b in zip(self.x, self.z))
        return ["+", "+i", "-", "-i"][self.phase] + body

    def __repr__(self):
        return f"PauliString({self.label()!r})"

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes(), self.phase))

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        _same_size(self, other)
        ph = self.phase + other.phase + int(np.sum(_g(self.x, self.z, other.x, other.z)))
        return PauliString(self.x ^ other.x, self.z ^ other.z, ph)

    def __neg__(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase + 2)

    def commutes(self, other: "PauliString") -> bool:
        return pauli_commutes(self, other)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("non-Hermitian string has no real sign")
        return 1 if self.phase == 0 else -1

    def unsigned(self) -> "PauliString":
        return PauliString(self.x, self.z, 0)

    def support(self) -> list[int]:
        return [int(q) for q in np.flatnonzero(self.x | self.z)]

    def to_matrix(self) -> np.ndarray:
        mats = {(0, 0): np.eye(2), (1, 0): sv.X.matrix, (0, 1): sv.Z.matrix, (1, 1): sv.Y.matrix}
        out = np.array([[1j**self.phase]], dtype=np.complex128)
        for a, b in zip(self.x, self.z):
            out = np.kron(out, mats[(int(a), int(b))])
        return out


def _same_size(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"Pauli strings act on {p.n} and {q.n} qubits")


def pauli_commutes(p: PauliString, q: PauliString) -> bool:
    _same_size(p, q)
    return int(np.sum((p.x & q.z) ^ (p.z & q.x))) % 2 == 0


# ---------------------------------------------------------------------------
# Clifford gates acting on rows of (x, z) bits


CLIFFORD_KINDS = {"H": 1, "S": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2, "CZ": 2}


@dataclass(frozen=True)
class CliffordOp:
    kind: str
    targets: tuple[int, ...]

    def __post_init__(self):
        kind = self.kind.upper()
        if kind == "CX":
            kind = "CNOT"
        if kind not in CLIFFORD_KINDS:
            raise ValueError(f"unsupported Clifford gate {self.kind!r}")
        targets = tuple(int(t) for t in self.targets)
        if len(targets) != CLIFFORD_KINDS[kind] or len(set(targets)) != len(targets):
            raise ValueError(f"{kind} needs {CLIFFORD_KINDS[kind]} distinct targets")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)

    def gate(self) -> sv.GateSpec:
        return sv.make_gate(self.kind)


def _conjugate_rows(x: np.ndarray, z: np.ndarray, op: CliffordOp) -> np.ndarray:
    """Conjugate every row in place by ``op``; returns the per-row sign-flip bits."""
    t = op.targets
    a = t[0]
    if op.kind == "H":
        flip = x[:, a] & z[:, a]
        x[:, a], z[:, a] = z[:, a].copy(), x[:, a].copy()
    elif op.kind == "S":
        flip = x[:, a] & z[:, a]
        z[:, a] ^= x[:, a]
    elif op.kind == "X":
        flip = z[:, a].copy()
    elif op.kind == "Z":
        flip = x[:, a].copy()
    elif op.kind == "Y":
        flip = x[:, a] ^ z[:, a]
    elif op.kind == "CNOT":
        b = t[1]
        flip = x[:, a] & z[:, b] & (x[:, b] ^ z[:, a] ^ 1)
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]
    elif op.kind == "CZ":
        b = t[1]
        flip = x[:, a] & x[:, b] & (z[:, a] ^ z[:, b])
        z[:, a] ^= x[:, b]
        z[:, b] ^= x[:, a]
    else:  # pragma: no cover - guarded by CliffordOp
        raise ValueError(op.kind)
    return flip


def _check_range(op: CliffordOp, n: int) -> None:
    for q in op.targets:
        if not 0 <= q < n:
            raise ValueError(f"target {q} out of range for {n} qubits")


def conjugate_clifford(op: CliffordOp, p: PauliString) -> PauliString:
    """Return ``U P U^dagger`` with exact phase tracking."""
    _check_range(op, p.n)
    x = p.x.copy()[None, :]
    z = p.z.copy()[None, :]
    flip = _conjugate_rows(x, z, op)
    return PauliString(x[0], z[0], p.phase + 2 * int(flip[0]))


# ---------------------------------------------------------------------------
# tableau


class Tableau:
    """Destabilizer/stabilizer tableau; rows ``0..n-1`` destabilizers, ``n..2n-1`` stabilizers.

    Methods named ``apply``/``measure`` mutate in place; the module-level
    ``tableau_*`` functions return copies.
    """

    def __init__(self, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.x = x
        self.z = z
        self.r = r

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @classmethod
    def new(cls, n: int) -> "Tableau":
        if n < 1:
            raise ValueError("tableau needs n >= 1")
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        x = np.vstack([eye, zero])
        z = np.vstack([zero, eye])
        return cls(x, z, np.zeros(2 * n, dtype=np.uint8))

    def copy(self) -> "Tableau":
        return Tableau(self.x.copy(), self.z.copy(), self.r.copy())

    def row(self, i: int) -> PauliString:
        return PauliString(self.x[i], self.z[i], 2 * int(self.r[i]))

    def stabilizers(self) -> list[PauliString]:
        return [self.row(i) for i in range(self.n, 2 * self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self.row(i) for i in range(self.n)]

    def apply(self, op: CliffordOp) -> "Tableau":
        _check_range(op, self.n)
        self.r ^= _conjugate_rows(self.x, self.z, op)
        return self

    def _rowsum(self, rows: np.ndarray, src: int) -> None:
        """rows <- src * rows, vectorized over ``rows``."""
        g = _g(self.x[src][None, :], self.z[src][None, :], self.x[rows], self.z[rows])
        total = 2 * self.r[rows].astype(np.int64) + 2 * int(self.r[src]) + g.sum(axis=1)
        self.r[rows] = ((total % 4) // 2).astype(np.uint8)
        self.x[rows] ^= self.x[src]
        self.z[rows] ^= self.z[src]

    def measure(self, q: int, rng: np.random.Generator | None = None, *, forced: int | None = None) -> tuple[int, bool]:
        """Measure Z on qubit ``q``; returns (bit, deterministic)."""
        n = self.n
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range for {n} qubits")
        anti = np.flatnonzero(self.x[n:, q]) + n
        if anti.size:
            p = int(anti[0])  # lowest anticommuting stabilizer row is the pivot
            others = np.flatnonzero(self.x[:, q])
            others = others[others != p]
            if others.size:
                self._rowsum(others, p)
            d = p - n
            self.x[d], self.z[d], self.r[d] = self.x[p], self.z[p], self.r[p]
            if forced is None:
                if rng is None:
                    raise ValueError("random outcome needs an rng")
                bit = int(rng.integers(2))
            else:
                bit = int(forced)
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            self.r[p] = bit
            return bit, False
        # deterministic: accumulate the stabilizers paired with anticommuting destabilizers
        scratch_x = np.zeros(n, dtype=np.uint8)
        scratch_z = np.zeros(n, dtype=np.uint8)
        phase = 0
        for i in np.flatnonzero(self.x[:n, q]):
            s = i + n
            phase += 2 * int(self.r[s]) + int(np.sum(_g(self.x[s], self.z[s], scratch_x, scratch_z)))
            scratch_x ^= self.x[s]
            scratch_z ^= self.z[s]
        bit = (phase % 4) // 2
        if forced is not None and int(forced) != bit:
            raise ValueError(f"forced outcome {forced} impossible: qubit {q} is deterministically {bit}")
        return bit, True

    def check_invariants(self) -> None:
        n = self.n
        for i in range(n):
            s = self.row(n + i)
            for j in range(n):
                if not pauli_commutes(s, self.row(n + j)):
                    raise AssertionError(f"stabilizers {i} and {j} anticommute")
                anti = not pauli_commutes(s, self.row(j))
                if anti != (i == j):
                    raise AssertionError(f"stabilizer {i} / destabilizer {j} pairing broken")
        m = np.hstack([self.x, self.z]).astype(np.int64)
        if _gf2_rank(m) != 2 * n:
            raise AssertionError("tableau rows are not independent")


def _gf2_rank(m: np.ndarray) -> int:
    m = m.copy() % 2
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = np.flatnonzero(m[rank:, c])
        if piv.size == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        mask = m[:, c].astype(bool)
        mask[rank] = False
        m[mask] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def tableau_new(n: int) -> Tableau:
    return Tableau.new(n)


def tableau_apply(t: Tableau, op: CliffordOp) -> Tableau:
    return t.copy().apply(op)


def tableau_measure(t: Tableau, q: int, rng: np.random.Generator | None = None, *, forced: int | None = None):
    out = t.copy()
    bit, det = out.measure(q, rng, forced=forced)
    return bit, det, out


def tableau_to_statevector(t: Tableau, max_qubits: int = 12) -> sv.QState:
    """The unique state stabilized by every stabilizer row (global phase arbitrary)."""
    n = t.n
    if n > max_qubits:
        raise CapExceededError(f"tableau_to_statevector is limited to {max_qubits} qubits")
    stabs = t.stabilizers()
    for b in range(2**n):
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[b] = 1.0
        for s in stabs:
            amps = 0.5 * (amps + sv.apply_pauli_amps(amps, n, s))
        nrm = np.linalg.norm(amps)
        if nrm > 1e-6:
            return sv.QState(n, amps / nrm)
    raise AssertionError("stabilizer group has no common +1 eigenvector")  # pragma: no cover


def stabilizer_group(generators: Iterable[PauliString]) -> set[PauliString]:
    """All products of the generators (2^k elements for independent commuting generators)."""
    gens = list(generators)
    group = {PauliString.identity(gens[0].n)}
    for g in gens:
        group |= {h * g for h in group}
    return group


def random_clifford_ops(n: int, depth: int, rng: np.random.Generator) -> list[CliffordOp]:
    kinds = ["H", "S", "X", "Y", "Z"] + (["CNOT", "CZ"] if n > 1 else [])
    ops = []
    for _ in range(depth):
        kind = kinds[rng.integers(len(kinds))]
        targets = rng.choice(n, size=CLIFFORD_KINDS[kind], replace=False)
        ops.append(CliffordOp(kind, tuple(int(q) for q in targets)))
    return ops
