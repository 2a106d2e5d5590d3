"""Desk-scale simulation of quantum algorithms, stabilizer codes, variational solvers and sampling models."""

from .errors import AlgorithmFailure, CapExceededError, NotCoprimeError, UnknownSyndromeError
from .statevec import Circuit, GateSpec, QState

__version__ = "0.1.0"

__all__ = [
    "AlgorithmFailure",
    "CapExceededError",
    "NotCoprimeError",
    "UnknownSyndromeError",
    "Circuit",
    "GateSpec",
    "QState",
]
