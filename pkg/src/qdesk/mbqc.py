"""Measurement-based computation on graph states.

Measuring sigma_phi = cos(phi) X + sin(phi) Y on one end of a CZ-linked pair
teleports X^m H Rz(-phi) onto the other end, so a rotation by theta needs the
measurement angle phi = -theta. The gadgets below take rotation angles and
convert them. Byproduct operators are recorded, never applied: a record with
exponents (x, z) means output = X^x Z^z (target) up to global phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import statevec as sv
from .clifford import PauliString


@dataclass(frozen=True)
class ClusterGraph:
    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    inputs: tuple[int, ...] = ()

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        seen = set()
        for a, b in edges:
            if not (0 <= a < self.num_nodes and 0 <= b < self.num_nodes):
                raise ValueError(f"edge ({a}, {b}) is out of range for {self.num_nodes} nodes")
            if a == b:
                raise ValueError("self-loops are not allowed")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add(key)
        inputs = tuple(int(i) for i in self.inputs)
        if len(set(inputs)) != len(inputs) or any(not 0 <= i < self.num_nodes for i in inputs):
            raise ValueError("input ids must be distinct and in range")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "inputs", inputs)

    @classmethod
    def linear(cls, n: int, inputs: Sequence[int] = ()) -> "ClusterGraph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)), tuple(inputs))

    def neighbours(self, node: int) -> list[int]:
        return [b if a == node else a for a, b in self.edges if node in (a, b)]


def build_cluster(g: ClusterGraph, inputs: Sequence[sv.QState] | sv.QState = ()) -> sv.QState:
    """Place the inputs on ``g.inputs`` (one joint state or one state per node), |+> elsewhere, then CZ every edge."""
    if isinstance(inputs, sv.QState):
        joint = inputs
    elif inputs:
        joint = sv.QState.product(list(inputs))
    else:
        joint = None
    k = len(g.inputs)
    if (joint.num_qubits if joint is not None else 0) != k:
        raise ValueError(f"graph has {k} input nodes but {0 if joint is None else joint.num_qubits} input qubits")
    n = g.num_nodes
    rest = n - k
    amps = joint.amplitudes if joint is not None else np.ones(1, dtype=np.complex128)
    if rest:
        amps = np.kron(amps, sv.QState.plus(rest).amplitudes)
    order = list(g.inputs) + [q for q in range(n) if q not in g.inputs]
    # axis a of the tensor currently holds node order[a]
    tensor = amps.reshape((2,) * n).transpose(np.argsort(order))
    state = sv.QState(n, tensor.reshape(-1))
    for a, b in g.edges:
        state = sv.apply_gate(state, sv.CZ, (a, b))
    return state


def nullifiers(g: ClusterGraph) -> list[PauliString]:
    """K_i = X_i prod_{k in N(i)} Z_k for every node."""
    return [
        PauliString.from_ops(g.num_nodes, {i: "X", **{k: "Z" for k in g.neighbours(i)}})
        for i in range(g.num_nodes)
    ]


def rotated_basis(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors of sigma_phi for eigenvalues +1 (m = 0) and -1 (m = 1)."""
    e = np.exp(1j * phi)
    return np.array([1, e]) / np.sqrt(2), np.array([1, -e]) / np.sqrt(2)


def _choose(probs: Sequence[float], rng, forced) -> int:
    if forced is not None:
        m = int(forced)
        if m not in (0, 1):
            raise ValueError("forced outcome must be 0 or 1")
        return m
    if rng is None:
        raise ValueError("measurement needs an rng unless the outcome is forced")
    return int(rng.random() >= probs[0])


def measure_rotated(
    state: sv.QState,
    q: int,
    phi: float,
    rng: np.random.Generator | None = None,
    *,
    forced: int | None = None,
) -> tuple[int, sv.QState]:
    """Projective sigma_phi measurement; the measured qubit is left in |phi_m>."""
    n = state.num_qubits
    sv._check_targets(n, [q])
    # rotate |phi_+->  to |0>/|1>, measure, rotate back
    to_z = np.conj(np.array(rotated_basis(phi)))
    rotated = sv.QState(n, sv._apply_matrix(state.amplitudes, n, to_z, (q,)))
    probs = [sv.outcome_probability(rotated, q, 0), sv.outcome_probability(rotated, q, 1)]
    m = _choose(probs, rng, forced)
    _, collapsed = sv.measure_qubit(rotated, q, forced=m)
    back = sv._apply_matrix(collapsed.amplitudes, n, to_z.conj().T, (q,))
    return m, sv.QState(n, back)


def _measure_and_remove(state: sv.QState, q: int, phi: float, rng, forced) -> tuple[int, sv.QState]:
    kets = rotated_basis(phi)
    n = state.num_qubits
    psi = state.amplitudes.reshape(2**q, 2, 2 ** (n - 1 - q))
    probs = [float(np.sum(np.abs(np.einsum("i,aib->ab", np.conj(k), psi)) ** 2)) for k in kets]
    m = _choose(probs, rng, forced)
    _, rest = sv.project_out(state, q, kets[m])
    return m, rest


@dataclass(frozen=True)
class ByproductRecord:
    outcomes: tuple[int, ...]
    x: tuple[int, ...]
    z: tuple[int, ...]
    output_nodes: tuple[int, ...]
    angles: tuple[float, ...] = ()  # physical measurement angles, in measurement order


def apply_corrections(state: sv.QState, record: ByproductRecord) -> sv.QState:
    """Undo the byproduct: apply X^x, then Z^z."""
    n = state.num_qubits
    if len(record.x) != n:
        raise ValueError("record does not match the state size")
    x = PauliString(record.x, np.zeros(n, dtype=int))
    z = PauliString(np.zeros(n, dtype=int), record.z)
    return sv.apply_pauli(sv.apply_pauli(state, x), z)


def teleport_step(
    psi: sv.QState,
    phi: float,
    rng: np.random.Generator | None = None,
    *,
    forced: int | None = None,
) -> tuple[sv.QState, int]:
    """Entangle psi with |+>, measure sigma_phi on psi; the survivor is X^m H Rz(-phi) psi."""
    if psi.num_qubits != 1:
        raise ValueError("teleport_step takes a single-qubit state")
    state = build_cluster(ClusterGraph(2, ((0, 1),), (0,)), [psi])
    m, out = _measure_and_remove(state, 0, phi, rng, forced)
    return out, m


def mbqc_single_qubit(
    psi: sv.QState,
    alpha: float,
    beta: float,
    gamma: float,
    rng: np.random.Generator | None = None,
    *,
    forced: Sequence[int] | None = None,
    adaptive: bool = True,
) -> tuple[sv.QState, ByproductRecord]:
    """Three adaptive measurements along a 4-node chain.

    The output is X^m3 Z^m2 X^m1 H Rz(gamma) Rx(beta) Rz(alpha) psi. Rotations
    after the first pick up the sign (-1)^m of the preceding outcome; with
    ``adaptive=False`` the signs are not fed forward.
    """
    if psi.num_qubits != 1:
        raise ValueError("mbqc_single_qubit takes a single-qubit state")
    state = build_cluster(ClusterGraph.linear(4, (0,)), [psi])
    outcomes: list[int] = []
    angles = []
    for step, theta in enumerate((alpha, beta, gamma)):
        sign = (-1) ** outcomes[-1] if (outcomes and adaptive) else 1
        phi = -sign * theta
        m, state = _measure_and_remove(state, 0, phi, rng, None if forced is None else forced[step])
        outcomes.append(m)
        angles.append(phi)
    m1, m2, m3 = outcomes
    return state, ByproductRecord(tuple(outcomes), (m1 ^ m3,), (m2,), (3,), tuple(angles))


def single_qubit_target(alpha: float, beta: float, gamma: float) -> np.ndarray:
    return sv.H.matrix @ sv.rz(gamma).matrix @ sv.rx(beta).matrix @ sv.rz(alpha).matrix


def mbqc_cnot(
    psi: sv.QState,
    rng: np.random.Generator | None = None,
    *,
    forced: Sequence[int] | None = None,
) -> tuple[sv.QState, ByproductRecord]:
    """Four-node CNOT gadget: control on node 0, target input on node 1, output on nodes (0, 3).

    Nodes 2 and 3 start in |+>; edges (2, 3), (0, 2), (1, 2); nodes 1 and 2 are
    measured in the X basis with outcomes (a, b). The output is
    X_3^b (Z_0 Z_3)^a CNOT(0 -> 3) psi.
    """
    if psi.num_qubits != 2:
        raise ValueError("mbqc_cnot takes a two-qubit state")
    state = build_cluster(ClusterGraph(4, ((2, 3), (0, 2), (1, 2)), (0, 1)), psi)
    a, state = _measure_and_remove(state, 1, 0.0, rng, None if forced is None else forced[0])
    # node 2 is now at index 1
    b, state = _measure_and_remove(state, 1, 0.0, rng, None if forced is None else forced[1])
    return state, ByproductRecord((a, b), (0, b), (a, a), (0, 3), (0.0, 0.0))
