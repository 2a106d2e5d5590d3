"""Ising and QUBO problems, the three encoders, and an exhaustive ground-state oracle.

Spins and bits are tied by z = (1 - s) / 2, so bit 0 is spin +1. Basis index
ordering matches the statevector: qubit 0 is the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import CapExceededError

MAX_BRUTE_FORCE = 24


def _spin_column(n: int, i: int, size: int | None = None) -> np.ndarray:
    idx = np.arange(2**n if size is None else size)
    return 1.0 - 2.0 * ((idx >> (n - 1 - i)) & 1)


@dataclass(frozen=True)
class IsingProblem:
    """energy(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i + offset."""

    J: np.ndarray
    h: np.ndarray
    offset: float = 0.0
    sense: str = "minimize"

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        h = np.array(self.h, dtype=float)
        n = h.size
        if J.shape != (n, n):
            raise ValueError(f"J has shape {J.shape}, expected ({n}, {n})")
        if np.any(np.tril(J) != 0):
            raise ValueError("J must be strictly upper-triangular")
        if self.sense not in ("minimize", "maximize"):
            raise ValueError(f"unknown sense {self.sense!r}")
        J.flags.writeable = False
        h.flags.writeable = False
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_couplings(cls, n: int, couplings: dict, fields=None, offset=0.0, sense="minimize"):
        """Build from ``{(i, j): J_ij}``; pairs are folded into i < j and summed."""
        J = np.zeros((n, n))
        for (i, j), v in couplings.items():
            if i == j:
                raise ValueError("self-coupling s_i s_i is a constant; put it in the offset")
            a, b = min(i, j), max(i, j)
            J[a, b] += v
        return cls(J, np.zeros(n) if fields is None else fields, offset, sense)

    @property
    def n(self) -> int:
        return self.h.size

    def energy(self, spins: Sequence[int]) -> float:
        s = np.asarray(spins, dtype=float)
        if s.shape != (self.n,) or not np.all(np.abs(s) == 1):
            raise ValueError("spins must be a vector of +-1")
        return float(s @ self.J @ s + self.h @ s + self.offset)

    def energy_bits(self, bits: Sequence[int] | str) -> float:
        z = np.array([int(b) for b in bits])
        return self.energy(1 - 2 * z)

    def energies(self) -> np.ndarray:
        """Energies of all 2^n bitstrings in basis order (the diagonal of H_C)."""
        n = self.n
        if n > MAX_BRUTE_FORCE:
            raise CapExceededError(f"{n} spins exceed the enumeration cap {MAX_BRUTE_FORCE}")
        e = np.full(2**n, self.offset)
        cols = [_spin_column(n, i) for i in range(n)]
        for i in range(n):
            if self.h[i]:
                e += self.h[i] * cols[i]
            for j in np.flatnonzero(self.J[i]):
                e += self.J[i, j] * cols[i] * cols[j]
        return e

    def negated(self) -> "IsingProblem":
        flip = {"minimize": "maximize", "maximize": "minimize"}[self.sense]
        return IsingProblem(-self.J, -self.h, -self.offset, flip)

    def objective_sign(self) -> int:
        """+1 if lower is better, -1 if higher is better."""
        return 1 if self.sense == "minimize" else -1


@dataclass(frozen=True)
class QuboProblem:
    """q(z) = sum_j Q_jj z_j + sum_{j<k} Q_jk z_j z_k + offset."""

    Q: np.ndarray
    offset: float = 0.0
    sense: str = "minimize"

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if np.any(np.tril(Q, -1) != 0):
            raise ValueError("Q must be upper-triangular")
        Q.flags.writeable = False
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def energy(self, bits: Sequence[int] | str) -> float:
        z = np.array([int(b) for b in bits], dtype=float)
        return float(z @ self.Q @ z + self.offset)


def ising_to_qubo(p: IsingProblem) -> QuboProblem:
    J, h = p.J, p.h
    row_col = J.sum(axis=1) + J.sum(axis=0)  # sum over every coupling touching i
    Q = 4 * J + np.diag(-2 * h - 2 * row_col)
    return QuboProblem(Q, p.offset + h.sum() + J.sum(), p.sense)


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    Q = q.Q
    diag = np.diag(Q)
    off = np.triu(Q, 1)
    J = off / 4
    h = -diag / 2 - (off.sum(axis=1) + off.sum(axis=0)) / 4
    offset = diag.sum() / 2 + off.sum() / 4 + q.offset
    return IsingProblem(J, h, offset, q.sense)


# ---------------------------------------------------------------------------
# encoders


def _nonempty(nums: Iterable[int]) -> np.ndarray:
    arr = np.array(list(nums), dtype=float)
    if arr.size == 0:
        raise ValueError("the number set is empty")
    return arr


def encode_subset_sum(nums: Sequence[int], m: int) -> IsingProblem:
    """Ising form of (sum_i n_i z_i - m)^2, zero exactly when a subset sums to m."""
    a = _nonempty(nums)
    c = a.sum() / 2 - m
    return IsingProblem(np.triu(np.outer(a, a), 1) / 2, -c * a, c**2 + (a**2).sum() / 4)


def encode_number_partition(nums: Sequence[int]) -> IsingProblem:
    """Ising form of (sum_i n_i s_i)^2, zero exactly for a perfect partition."""
    a = _nonempty(nums)
    return IsingProblem(2 * np.triu(np.outer(a, a), 1), np.zeros(a.size), (a**2).sum())


def encode_maxcut(edges: Iterable[tuple], n: int | None = None) -> IsingProblem:
    """Cut weight (1/2) sum w_ij (1 - s_i s_j) over edges (i, j[, w]); maximize sense."""
    edges = [(int(e[0]), int(e[1]), float(e[2]) if len(e) > 2 else 1.0) for e in edges]
    if n is None:
        n = 1 + max((max(i, j) for i, j, _ in edges), default=-1)
    couplings: dict = {}
    offset = 0.0
    for i, j, w in edges:
        if w < 0:
            raise ValueError(f"negative weight on edge ({i}, {j})")
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bad edge ({i}, {j}) for {n} vertices")
        key = (min(i, j), max(i, j))
        couplings[key] = couplings.get(key, 0.0) - w / 2
        offset += w / 2
    return IsingProblem.from_couplings(n, couplings, offset=offset, sense="maximize")


# ---------------------------------------------------------------------------
# exhaustive oracle


@dataclass(frozen=True)
class GroundResult:
    value: float
    optimizers: tuple[str, ...]


def brute_force_ground(p: IsingProblem, rel_tol: float = 1e-9) -> GroundResult:
    """Optimal energy (sense-aware) and every bitstring attaining it."""
    e = p.energies()
    best = e.min() if p.sense == "minimize" else e.max()
    tol = rel_tol * max(1.0, abs(best))
    idx = np.flatnonzero(np.abs(e - best) <= tol)
    return GroundResult(float(best), tuple(format(int(i), f"0{p.n}b") for i in idx))


def optimal_mask(p: IsingProblem, energies: np.ndarray | None = None, rel_tol: float = 1e-9) -> np.ndarray:
    e = p.energies() if energies is None else energies
    best = e.min() if p.sense == "minimize" else e.max()
    return np.abs(e - best) <= rel_tol * max(1.0, abs(best))


def selected(bits: str, nums: Sequence[int]) -> list[int]:
    """Elements picked by a bitstring (bit 1 means selected)."""
    return [int(v) for b, v in zip(bits, nums) if b == "1"]
