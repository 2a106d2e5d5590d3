"""IQP circuits and boson-sampling probabilities.

Permanents use Ryser's inclusion-exclusion formula in Gray-code order, which
is O(2^n n). Fock configurations are enumerated lexicographically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import comb, gammaln

from . import statevec as sv
from .errors import CapExceededError

MAX_PERMANENT = 20
MAX_NAIVE_PERMANENT = 8
MAX_CONFIGS = 10**5
LOG_SPACE_PHOTONS = 10


# ---------------------------------------------------------------------------
# permanents


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    return a


def permanent(a) -> complex:
    """Ryser's formula with Gray-code updates of the row sums."""
    a = _square(a)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n > MAX_PERMANENT:
        raise CapExceededError(f"{n}x{n} permanent exceeds the size cap {MAX_PERMANENT}")
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    subset = 0
    for k in range(1, 2**n):
        bit = (k & -k).bit_length() - 1  # column that flips in the Gray code
        subset ^= 1 << bit
        if subset >> bit & 1:
            row_sums += a[:, bit]
        else:
            row_sums -= a[:, bit]
        size = bin(subset).count("1")
        total += (-1) ** size * np.prod(row_sums)
    return complex((-1) ** n * total)


def permanent_naive(a) -> complex:
    """Sum over all permutations; the reference for small matrices."""
    a = _square(a)
    n = a.shape[0]
    if n > MAX_NAIVE_PERMANENT:
        raise CapExceededError(f"naive permanent is limited to {MAX_NAIVE_PERMANENT}x{MAX_NAIVE_PERMANENT}")
    rows = np.arange(n)
    return complex(sum(np.prod(a[rows, list(p)]) for p in itertools.permutations(range(n))))


# ---------------------------------------------------------------------------
# linear optics


@dataclass(frozen=True)
class Interferometer:
    U: np.ndarray

    def __post_init__(self):
        u = np.array(self.U, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("interferometer matrix must be square")
        if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) >= 1e-10:
            raise ValueError("interferometer matrix is not unitary")
        u.flags.writeable = False
        object.__setattr__(self, "U", u)

    @property
    def M(self) -> int:
        return self.U.shape[0]


@dataclass(frozen=True)
class FockConfig:
    occupations: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(v) for v in self.occupations)
        if any(v < 0 for v in occ):
            raise ValueError("occupations must be non-negative")
        object.__setattr__(self, "occupations", occ)

    @property
    def N(self) -> int:
        return sum(self.occupations)

    @property
    def M(self) -> int:
        return len(self.occupations)


def _occ(config) -> tuple[int, ...]:
    return config.occupations if isinstance(config, FockConfig) else tuple(int(v) for v in config)


def random_interferometer(M: int, rng: np.random.Generator) -> Interferometer:
    """Haar-random unitary: QR of a complex Gaussian matrix with R's diagonal phases removed."""
    if M < 1:
        raise ValueError("need at least one mode")
    z = (rng.normal(size=(M, M)) + 1j * rng.normal(size=(M, M))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return Interferometer(q * (d / np.abs(d)))


def fock_configs(N: int, M: int) -> list[tuple[int, ...]]:
    """All occupation tuples of N photons in M modes, in lexicographic order."""
    if N < 0 or M < 1:
        raise ValueError("need N >= 0 and M >= 1")
    if comb(N + M - 1, N, exact=True) > MAX_CONFIGS:
        raise CapExceededError(f"{comb(N + M - 1, N, exact=True)} configurations exceed {MAX_CONFIGS}")
    out = []
    for bars in itertools.combinations(range(N + M - 1), M - 1):
        edges = (-1,) + bars + (N + M - 1,)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(M)))
    return sorted(out)


def _submatrix(u: Interferometer, inp: tuple[int, ...], out: tuple[int, ...]) -> np.ndarray:
    if len(inp) != u.M or len(out) != u.M:
        raise ValueError(f"configurations must have {u.M} modes")
    if any(v > 1 for v in inp):
        raise ValueError("input modes must hold at most one photon")
    if sum(inp) != sum(out):
        raise ValueError(f"photon number mismatch: {sum(inp)} in, {sum(out)} out")
    rows = [i for i, v in enumerate(inp) if v]
    cols = [j for j, v in enumerate(out) for _ in range(v)]
    return u.U[np.ix_(rows, cols)]


def boson_prob(u: Interferometer, inp, out) -> float:
    """|Per(U_S)|^2 / prod_i S_i!, with rows from the occupied inputs and column i repeated S_i times."""
    inp, out = _occ(inp), _occ(out)
    sub = _submatrix(u, inp, out)
    per = permanent(sub)
    if sum(out) > LOG_SPACE_PHOTONS:
        if per == 0:
            return 0.0
        log_p = 2 * math.log(abs(per)) - sum(gammaln(v + 1) for v in out)
        return float(math.exp(log_p))
    return float(abs(per) ** 2 / math.prod(math.factorial(v) for v in out))


def default_input(N: int, M: int) -> tuple[int, ...]:
    """One photon in each of the first N modes."""
    if N > M:
        raise ValueError("single-photon inputs need N <= M")
    return (1,) * N + (0,) * (M - N)


def boson_distribution(u: Interferometer, N: int, inp=None) -> dict[tuple[int, ...], float]:
    inp = default_input(N, u.M) if inp is None else _occ(inp)
    if sum(inp) != N:
        raise ValueError("input photon count does not match N")
    return {cfg: boson_prob(u, inp, cfg) for cfg in fock_configs(N, u.M)}


def boson_distribution_bruteforce(u: Interferometer, inp) -> dict[tuple[int, ...], float]:
    """Expand prod_rows (sum_k U_rk b_k^dagger) |0> into Fock amplitudes.

    A monomial prod_k (b_k^dagger)^{S_k} acting on vacuum gives sqrt(prod S_k!) |S>,
    so P(S) = |c_S|^2 prod S_k!.
    """
    inp = _occ(inp)
    rows = [i for i, v in enumerate(inp) if v]
    if any(v > 1 for v in inp):
        raise ValueError("input modes must hold at most one photon")
    coeffs: dict[tuple[int, ...], complex] = {}
    for cols in itertools.product(range(u.M), repeat=len(rows)):
        occ = [0] * u.M
        for c in cols:
            occ[c] += 1
        key = tuple(occ)
        coeffs[key] = coeffs.get(key, 0j) + np.prod([u.U[r, c] for r, c in zip(rows, cols)])
    return {
        cfg: float(abs(coeffs.get(cfg, 0)) ** 2 * math.prod(math.factorial(v) for v in cfg))
        for cfg in fock_configs(len(rows), u.M)
    }


def sample_boson(u: Interferometer, N: int, shots: int, rng: np.random.Generator, inp=None) -> dict[str, int]:
    dist = boson_distribution(u, N, inp)
    configs = list(dist)
    p = np.array([dist[c] for c in configs])
    counts = rng.multinomial(shots, p / p.sum())
    return {",".join(map(str, c)): int(k) for c, k in zip(configs, counts) if k}


# ---------------------------------------------------------------------------
# IQP


GATESETS = {1: ("SQRTCZ", "T"), 2: ("Z", "CZ", "CCZ")}
_ARITY = {"SQRTCZ": 2, "T": 1, "Z": 1, "CZ": 2, "CCZ": 3}


def diagonal_gate(name: str, power: int = 1) -> np.ndarray:
    """Diagonal of an IQP gate; ``T`` takes a power k and gives diag(1, e^{i pi k / 4})."""
    if name == "T":
        return np.array([1, np.exp(1j * np.pi * power / 4)])
    return np.diag(sv.make_gate(name).matrix).copy()


@dataclass(frozen=True)
class IqpCircuit:
    n: int
    diagonal_ops: tuple[tuple[str, tuple[int, ...], int], ...]  # (gate, targets, power)
    gateset: int

    def __post_init__(self):
        if self.gateset not in GATESETS:
            raise ValueError(f"gateset must be 1 or 2, got {self.gateset}")
        ops = []
        for name, targets, power in self.diagonal_ops:
            if name not in GATESETS[self.gateset]:
                raise ValueError(f"{name} is not in gate set {self.gateset}")
            targets = tuple(int(t) for t in targets)
            if len(targets) != _ARITY[name] or len(set(targets)) != len(targets):
                raise ValueError(f"{name} needs {_ARITY[name]} distinct targets")
            if any(not 0 <= t < self.n for t in targets):
                raise ValueError(f"target out of range in {name} {targets}")
            ops.append((name, targets, int(power)))
        object.__setattr__(self, "diagonal_ops", tuple(ops))

    def diagonal(self) -> np.ndarray:
        """The full 2^n diagonal of D."""
        d = np.ones(2**self.n, dtype=np.complex128)
        idx = np.arange(2**self.n)
        for name, targets, power in self.diagonal_ops:
            local = diagonal_gate(name, power)
            sub = np.zeros(idx.size, dtype=np.int64)
            for t in targets:
                sub = (sub << 1) | sv.bit_of(idx, t, self.n)
            d *= local[sub]
        return d

    def gate_matrices(self) -> list[np.ndarray]:
        """Each op embedded as a dense 2^n matrix."""
        return [
            sv.embed(np.diag(diagonal_gate(name, power)), targets, self.n)
            for name, targets, power in self.diagonal_ops
        ]


def iqp_random(n: int, gateset: int, depth: int, rng: np.random.Generator) -> IqpCircuit:
    """``depth`` gates, each picked uniformly from the set that fits in n qubits, on uniform random targets.

    T gates get a uniform power in 1..7.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    if gateset not in GATESETS:
        raise ValueError(f"gateset must be 1 or 2, got {gateset}")
    names = [g for g in GATESETS[gateset] if _ARITY[g] <= n]
    ops = []
    for _ in range(depth):
        name = names[int(rng.integers(len(names)))]
        targets = tuple(int(t) for t in rng.choice(n, size=_ARITY[name], replace=False))
        power = int(rng.integers(1, 8)) if name == "T" else 1
        ops.append((name, targets, power))
    return IqpCircuit(n, tuple(ops), gateset)


def iqp_distribution(c: IqpCircuit, *, max_qubits: int = sv.MAX_QUBITS) -> np.ndarray:
    """|<x| H^n D H^n |0^n>|^2 for all x."""
    if c.n > max_qubits:
        raise CapExceededError(f"{c.n} qubits exceed the cap {max_qubits}")
    n = c.n
    amps = sv.QState.plus(n).amplitudes * c.diagonal()
    for q in range(n):
        amps = sv._apply_matrix(amps, n, sv.H.matrix, (q,))
    return np.abs(amps) ** 2


def iqp_sample(
    c: IqpCircuit, shots: int, rng: np.random.Generator, *, max_qubits: int = sv.MAX_QUBITS
) -> tuple[list[str], np.ndarray]:
    dist = iqp_distribution(c, max_qubits=max_qubits)
    draws = rng.choice(dist.size, size=shots, p=dist / dist.sum())
    return [format(int(i), f"0{c.n}b") for i in draws], dist


def hadamard_gadget(psi: sv.QState) -> tuple[float, sv.QState, sv.QState]:
    """Ancilla |+>, CZ, X-basis measurement of the data qubit.

    Returns the probability of the + outcome and the ancilla's conditional
    states for both outcomes. No sampling happens, so no rng is needed.
    """
    if psi.num_qubits != 1:
        raise ValueError("hadamard_gadget takes a single-qubit state")
    state = sv.apply_gate(psi.tensor(sv.QState.plus(1)), sv.CZ, (0, 1))
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    p_plus, on_plus = sv.project_out(state, 0, plus)
    _, on_minus = sv.project_out(state, 0, minus)
    return p_plus, on_plus, on_minus
