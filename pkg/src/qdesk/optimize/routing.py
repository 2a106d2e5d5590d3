"""Odd-even transposition SWAP networks on a line of qubits."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class SwapNetwork:
    layers: tuple[tuple[tuple[int, int], ...], ...]
    final_permutation: tuple[int, ...]  # final_permutation[position] = logical qubit there

    @property
    def depth(self) -> int:
        return len(self.layers)


def swap_network_linear(n: int) -> SwapNetwork:
    """n alternating layers of adjacent SWAPs; every pair of logical qubits meets once."""
    if n < 2:
        raise ValueError("need at least two qubits")
    layers = []
    for k in range(n):
        layer = tuple((i, i + 1) for i in range(k % 2, n - 1, 2))
        if layer:
            layers.append(layer)
    order = list(range(n))
    for layer in layers:
        for a, b in layer:
            order[a], order[b] = order[b], order[a]
    return SwapNetwork(tuple(layers), tuple(order))


def pairs_met(network: SwapNetwork, n: int) -> set[frozenset]:
    """Simulate tokens and collect every logical pair that sits on adjacent sites at some point."""
    order = list(range(n))
    met = {frozenset((order[i], order[i + 1])) for i in range(n - 1)}
    for layer in network.layers:
        for a, b in layer:
            order[a], order[b] = order[b], order[a]
        met |= {frozenset((order[i], order[i + 1])) for i in range(n - 1)}
    return met


def all_pairs(n: int) -> set[frozenset]:
    return {frozenset(p) for p in combinations(range(n), 2)}
