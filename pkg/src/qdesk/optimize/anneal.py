"""Trotterized annealing, its QAOA angle mapping, time to solution and gap scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import statevec as sv
from ..clifford import PauliString
from ..errors import CapExceededError
from .problems import IsingProblem, optimal_mask
from .qaoa import QaoaParams, apply_mixer
from .vqe import hamiltonian_matrix


def linear_a(s: float) -> float:
    return 1.0 - s


def linear_b(s: float) -> float:
    return s


@dataclass(frozen=True)
class AnnealSchedule:
    """H(s) = A(s) H0 + B(s) H_C with H0 = -sum X, swept over total time ``tau`` in ``steps`` steps."""

    tau: float
    steps: int
    A: Callable[[float], float] = linear_a
    B: Callable[[float], float] = linear_b

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")

    @property
    def dt(self) -> float:
        return self.tau / self.steps

    def midpoints(self) -> np.ndarray:
        return (np.arange(1, self.steps + 1) - 0.5) / self.steps


def anneal_evolve(
    p: IsingProblem, sched: AnnealSchedule, *, max_qubits: int = sv.MAX_QUBITS
) -> tuple[sv.QState, float]:
    """Evolve |+>^n under the symmetrized Trotter product and report ground-state weight.

    Each step at midpoint s applies exp(-i dt A H0 / 2) exp(-i dt B H_C) exp(-i dt A H0 / 2).
    Since H0 = -sum X, the half step is the mixer with angle -dt A / 2.
    """
    n = p.n
    if n > max_qubits:
        raise CapExceededError(f"{n} qubits exceed the cap {max_qubits}")
    diag = p.energies()
    amps = np.full(diag.size, 2 ** (-n / 2), dtype=np.complex128)
    dt = sched.dt
    for s in sched.midpoints():
        a, b = sched.A(s), sched.B(s)
        amps = apply_mixer(amps, n, -dt * a / 2)
        amps = amps * np.exp(-1j * dt * b * diag)
        amps = apply_mixer(amps, n, -dt * a / 2)
    state = sv.QState.from_amplitudes(amps, normalize=True)
    mask = optimal_mask(p, diag)
    return state, float(state.probabilities()[mask].sum())


def qa_to_qaoa_angles(
    N: int,
    tau: float,
    A: Callable[[float], float] = linear_a,
    B: Callable[[float], float] = linear_b,
) -> QaoaParams:
    """QAOA angles reproducing the N-step symmetrized anneal with step length ``tau``.

    gamma_n = tau B(s_n); adjacent half steps merge into beta_n = -tau (A(s_n) + A(s_n+1)) / 2,
    the last one is -tau A(s_N) / 2, and the first half step only adds a global phase on |+>^n.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    s = (np.arange(1, N + 1) - 0.5) / N
    a = np.array([A(x) for x in s])
    gammas = tau * np.array([B(x) for x in s])
    betas = np.empty(N)
    betas[:-1] = -tau * (a[:-1] + a[1:]) / 2
    betas[-1] = -tau * a[-1] / 2
    return QaoaParams(tuple(gammas), tuple(betas))


def time_to_solution(p_success: float, tau: float) -> float:
    """Total time for 99% cumulative success, with the repetition count clamped to >= 1."""
    if not 0 < p_success <= 1:
        raise ValueError("success probability must lie in (0, 1]")
    if p_success >= 0.99:
        return float(tau)
    m = math.log(0.01) / math.log1p(-p_success)
    return max(m, 1.0) * tau


@dataclass
class GapScan:
    min_gap: float
    s_min: float
    s: np.ndarray
    gaps: np.ndarray


def _as_matrix(h) -> np.ndarray:
    if isinstance(h, np.ndarray):
        return h
    return hamiltonian_matrix(h)


MAX_GAP_QUBITS = 10


def gap_scan(h0, h1, resolution: float = 1e-3) -> GapScan:
    """Spectral gap E1 - E0 of (1 - s) H0 + s H1 on a uniform grid of spacing ``resolution``.

    ``h0`` and ``h1`` are dense Hermitian matrices or lists of (coefficient, PauliString).
    """
    m0, m1 = _as_matrix(h0), _as_matrix(h1)
    if m0.shape != m1.shape or m0.shape[0] != m0.shape[1]:
        raise ValueError("Hamiltonians must be square and of equal size")
    if m0.shape[0] > 2**MAX_GAP_QUBITS:
        raise CapExceededError(f"gap scans are limited to {MAX_GAP_QUBITS} qubits")
    if m0.shape[0] < 2:
        raise ValueError("need at least two levels")
    count = int(round(1 / resolution))
    s = np.linspace(0.0, 1.0, count + 1)
    gaps = np.empty(s.size)
    for k, x in enumerate(s):
        w = np.linalg.eigvalsh((1 - x) * m0 + x * m1)
        gaps[k] = w[1] - w[0]
    i = int(np.argmin(gaps))
    return GapScan(float(gaps[i]), float(s[i]), s, gaps)


def ground_weight_samples(
    state: sv.QState, p: IsingProblem, shots: int, rng: np.random.Generator
) -> float:
    """Fraction of measured shots that land on a ground state."""
    mask = optimal_mask(p)
    probs = state.probabilities()
    draws = rng.choice(probs.size, size=shots, p=probs / probs.sum())
    return float(mask[draws].mean())


def transverse_field(n: int) -> list:
    """-sum_i X_i as Pauli terms."""
    return [(-1.0, PauliString.single(n, q, "X")) for q in range(n)]


def ising_terms(p: IsingProblem) -> list:
    """Ising cost as Pauli Z terms (offset dropped)."""
    n = p.n
    terms: list = [(float(p.h[i]), PauliString.single(n, i, "Z")) for i in range(n) if p.h[i]]
    for i, j in zip(*np.nonzero(p.J)):
        terms.append((float(p.J[i, j]), PauliString.from_ops(n, {int(i): "Z", int(j): "Z"})))
    return terms

