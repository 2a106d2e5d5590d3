"""QAOA states, expectations, gate-level compilation and the classical outer loop."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import statevec as sv
from ..errors import CapExceededError
from .optimizer import OptimizerConfig, multistart_minimize
from .problems import IsingProblem, optimal_mask


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(v) for v in np.atleast_1d(self.gammas))
        b = tuple(float(v) for v in np.atleast_1d(self.betas))
        if len(g) != len(b):
            raise ValueError(f"{len(g)} gammas but {len(b)} betas")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def p(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, v) -> "QaoaParams":
        v = np.asarray(v, dtype=float)
        if v.size % 2:
            raise ValueError("parameter vector must have even length")
        return cls(tuple(v[: v.size // 2]), tuple(v[v.size // 2 :]))

    def wrapped(self) -> "QaoaParams":
        """Fold into gamma in [0, 2pi), beta in [0, pi).

        The beta fold holds for any cost; the gamma fold is exact only when every
        cost value is an integer.
        """
        return QaoaParams(tuple(np.mod(self.gammas, 2 * np.pi)), tuple(np.mod(self.betas, np.pi)))

    def padded(self) -> "QaoaParams":
        """One extra layer of zero angles; the state is unchanged."""
        return QaoaParams(self.gammas + (0.0,), self.betas + (0.0,))


def _check_cap(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise CapExceededError(f"{n} qubits exceed the cap {max_qubits}")


def apply_mixer(amps: np.ndarray, n: int, beta: float) -> np.ndarray:
    """exp(-i beta sum_i X_i) as a product of single-qubit rotations."""
    rot = sv.rx(2 * beta).matrix
    for q in range(n):
        amps = sv._apply_matrix(amps, n, rot, (q,))
    return amps


def qaoa_amplitudes(diag: np.ndarray, params: QaoaParams) -> np.ndarray:
    n = diag.size.bit_length() - 1
    amps = np.full(diag.size, 2 ** (-n / 2), dtype=np.complex128)
    for g, b in zip(params.gammas, params.betas):
        amps = apply_mixer(amps * np.exp(-1j * g * diag), n, b)
    return amps


def qaoa_state(p: IsingProblem, params: QaoaParams, *, max_qubits: int = sv.MAX_QUBITS) -> sv.QState:
    _check_cap(p.n, max_qubits)
    return sv.QState(p.n, qaoa_amplitudes(p.energies(), params))


def qaoa_expectation(p: IsingProblem, params: QaoaParams, *, max_qubits: int = sv.MAX_QUBITS) -> float:
    """sum_z Prob_z C(z), with C the stored cost (sense is not applied here)."""
    _check_cap(p.n, max_qubits)
    diag = p.energies()
    amps = qaoa_amplitudes(diag, params)
    return float(np.abs(amps) ** 2 @ diag)


def sampled_expectation(
    p: IsingProblem, params: QaoaParams, shots: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Shot estimate of the cost expectation and its standard error."""
    diag = p.energies()
    probs = np.abs(qaoa_amplitudes(diag, params)) ** 2
    draws = diag[rng.choice(diag.size, size=shots, p=probs / probs.sum())]
    return float(draws.mean()), float(draws.std(ddof=1) / np.sqrt(shots))


def compile_qaoa_circuit(p: IsingProblem, params: QaoaParams, *, max_qubits: int = sv.MAX_QUBITS) -> sv.Circuit:
    """Gate-level QAOA over {H, RX, RZ, CZ}; the offset is dropped as a global phase.

    exp(-i a Z_i Z_j) is CNOT(i, j) RZ_j(2a) CNOT(i, j) with each CNOT written as
    H_j CZ H_j.
    """
    n = p.n
    _check_cap(n, max_qubits)
    c = sv.Circuit(n)
    for q in range(n):
        c.add("H", q)
    pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(p.J))]
    for g, b in zip(params.gammas, params.betas):
        for i, j in pairs:
            c.add("H", j).add("CZ", (i, j)).add("H", j)
            c.add("RZ", j, 2 * g * p.J[i, j])
            c.add("H", j).add("CZ", (i, j)).add("H", j)
        for q in np.flatnonzero(p.h):
            c.add("RZ", int(q), 2 * g * p.h[q])
        for q in range(n):
            c.add("RX", q, 2 * b)
    return c


@dataclass
class QaoaResult:
    params: QaoaParams
    expectation: float
    best_bitstring: str
    best_value: float
    optimum: float
    approximation_ratio: float | None
    success_probability: float
    converged: bool
    nfev: int


def qaoa_optimize(
    p: IsingProblem,
    depth: int,
    config: OptimizerConfig | None = None,
    rng: np.random.Generator | None = None,
    *,
    warm_start: QaoaParams | None = None,
    shots: int = 1000,
    max_qubits: int = sv.MAX_QUBITS,
) -> QaoaResult:
    """Restarted Nelder-Mead over (gammas, betas), then sample the optimized state.

    The objective is the expectation times +1 (minimize) or -1 (maximize). A
    shallower ``warm_start`` is zero-padded to ``depth`` and used as the first start.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if rng is None:
        raise ValueError("qaoa_optimize needs an rng")
    _check_cap(p.n, max_qubits)
    config = OptimizerConfig() if config is None else config
    diag = p.energies()
    sign = p.objective_sign()

    def objective(v):
        amps = qaoa_amplitudes(diag, QaoaParams.from_vector(v))
        return sign * float(np.abs(amps) ** 2 @ diag)

    starts = []
    if warm_start is not None:
        if warm_start.p > depth:
            raise ValueError("warm start is deeper than the requested depth")
        while warm_start.p < depth:
            warm_start = warm_start.padded()
        starts.append(warm_start.to_vector())
    res = multistart_minimize(objective, 2 * depth, config, rng, starts)
    params = QaoaParams.from_vector(res.x)
    probs = np.abs(qaoa_amplitudes(diag, params)) ** 2
    mask = optimal_mask(p, diag)
    optimum = float(diag[mask][0])
    draws = rng.choice(diag.size, size=shots, p=probs / probs.sum())
    best_idx = int(draws[np.argmin(sign * diag[draws])])
    best_value = float(diag[best_idx])
    ratio = best_value / optimum if optimum != 0 else None
    return QaoaResult(
        params=params,
        expectation=sign * res.fun,
        best_bitstring=format(best_idx, f"0{p.n}b"),
        best_value=best_value,
        optimum=optimum,
        approximation_ratio=ratio,
        success_probability=float(probs[mask].sum()),
        converged=res.converged,
        nfev=res.nfev,
    )
