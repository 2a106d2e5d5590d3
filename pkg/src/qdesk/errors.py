"""Exception types shared across qdesk modules."""


class CapExceededError(ValueError):
    """A register would exceed the configured qubit (or size) cap."""


class NotCoprimeError(ValueError):
    """Raised when a modular inverse or order is requested for non-coprime inputs."""

    def __init__(self, x: int, n: int, gcd: int):
        super().__init__(f"gcd({x}, {n}) = {gcd}; no inverse exists")
        self.x = x
        self.n = n
        self.gcd = gcd


class UnknownSyndromeError(LookupError):
    """The decoder table has no entry for a syndrome (error beyond the code's guarantee)."""


class AlgorithmFailure(RuntimeError):
    """An algorithm ran to completion without producing an answer (e.g. attempts exhausted)."""
