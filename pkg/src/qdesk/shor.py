"""Order finding and the factoring driver.

The quantum step is phase estimation on U|y> = |x y mod N> with the work
register prepared in |1>. Two exact routes compute its output distribution:
the full statevector (used when the register fits comfortably) and a
closed-form evaluation of the same circuit, which is needed for the default
t = 2L + 1 once N grows past a few hundred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import statevec as sv
from .algorithms import PhaseEstConfig, phase_estimate
from .errors import AlgorithmFailure, CapExceededError, NotCoprimeError

STATEVECTOR_LIMIT = 16  # total qubits above which "auto" switches to the closed form
MAX_FACTOR_N = 2**10


def mod_pow(x: int, e: int, N: int) -> int:
    """x**e mod N by square-and-multiply."""
    if N < 2:
        raise ValueError("modulus must be >= 2")
    if e < 0:
        raise ValueError("exponent must be >= 0")
    result, base = 1, x % N
    while e:
        if e & 1:
            result = result * base % N
        base = base * base % N
        e >>= 1
    return result


def mod_inverse(x: int, N: int) -> int:
    if N < 2:
        raise ValueError("modulus must be >= 2")
    old_r, r = x % N, N
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotCoprimeError(x, N, old_r)
    return old_s % N


def classical_order(x: int, N: int) -> int:
    g = math.gcd(x, N)
    if g != 1:
        raise NotCoprimeError(x, N, g)
    r, y = 1, x % N
    while y != 1 % N:
        y = y * x % N
        r += 1
    return r


def convergents(k: int, Q: int) -> list[Fraction]:
    out = []
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    a_num, a_den = k, Q
    while a_den:
        a = a_num // a_den
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
        a_num, a_den = a_den, a_num - a * a_den
    return out


def continued_fraction_r(k: int, Q: int, N: int) -> int | None:
    """Order candidate from a measured k, or None when k carries no information.

    Scans the convergents s/r of k/Q in order and returns the first denominator
    r < N with |k/Q - s/r| <= 1/(2Q); failing that, the last denominator below N.
    """
    if not 0 <= k < Q:
        raise ValueError("need 0 <= k < Q")
    if k == 0:
        return None
    target = Fraction(k, Q)
    last = None
    for c in convergents(k, Q):
        if c.denominator >= N:
            break
        last = c.denominator
        if abs(target - c) <= Fraction(1, 2 * Q):
            return c.denominator
    return last


def order_unitary(x: int, N: int) -> np.ndarray:
    """Permutation matrix U|y> = |x y mod N> on L = ceil(log2 N) qubits; identity for y >= N."""
    L = max(1, math.ceil(math.log2(N)))
    dim = 2**L
    u = np.zeros((dim, dim))
    for y in range(dim):
        u[(x * y) % N if y < N else y, y] = 1.0
    return u


def order_finding_distribution(x: int, N: int, t: int) -> np.ndarray:
    """Closed-form output distribution of the order-finding circuit.

    Before the inverse QFT the register holds sum_j |j>|x^j mod N>; grouping j by
    residue class j0 mod r turns each amplitude into a geometric series.
    """
    r = classical_order(x, N)
    Q = 2**t
    k = np.arange(Q)
    frac = (r * k % Q) / Q  # r k / Q mod 1
    s = np.sin(np.pi * frac)
    dist = np.zeros(Q)
    j0 = np.arange(min(r, Q))
    M = (Q - j0 + r - 1) // r
    for m, count in zip(*np.unique(M, return_counts=True)):
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(s < 1e-12, float(m) ** 2, (np.sin(np.pi * m * frac) / np.where(s < 1e-12, 1, s)) ** 2)
        dist += count * g
    return dist / Q**2


@dataclass
class OrderFindingRun:
    x: int
    N: int
    t: int
    L: int
    distribution: np.ndarray = field(repr=False)
    outcome_k: int
    candidate_r: int | None
    method: str


def quantum_order_finding(
    x: int,
    N: int,
    t: int | None = None,
    rng: np.random.Generator | None = None,
    *,
    method: str = "auto",
    max_qubits: int = sv.MAX_QUBITS,
) -> OrderFindingRun:
    g = math.gcd(x, N)
    if g != 1:
        raise NotCoprimeError(x, N, g)
    if not 1 < x < N:
        raise ValueError("need 1 < x < N")
    L = max(1, math.ceil(math.log2(N)))
    t = 2 * L + 1 if t is None else t
    if t < 2:
        raise ValueError("need t >= 2")
    if method == "auto":
        method = "statevector" if t + L <= min(STATEVECTOR_LIMIT, max_qubits) else "closed-form"
    if method == "statevector":
        if t + L > max_qubits:
            raise CapExceededError(f"order finding needs {t + L} qubits (cap {max_qubits})")
        work = sv.QState.basis(1, L)
        dist = phase_estimate(order_unitary(x, N), work, PhaseEstConfig(t), max_qubits=max_qubits).distribution
    elif method == "closed-form":
        dist = order_finding_distribution(x, N, t)
    else:
        raise ValueError(f"unknown method {method!r}")
    if rng is None:
        raise ValueError("order finding needs an rng to sample k")
    k = int(rng.choice(dist.size, p=dist / dist.sum()))
    return OrderFindingRun(x, N, t, L, dist, k, continued_fraction_r(k, 2**t, N), method)


# ---------------------------------------------------------------------------
# factoring


@dataclass
class FactorResult:
    n: int
    factors: tuple[int, int]
    attempts: int
    transcript: list[dict] = field(default_factory=list)


def integer_root(n: int, b: int) -> int:
    """floor(n ** (1/b)) for non-negative integers."""
    lo, hi = 0, 1 << (n.bit_length() // b + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**b <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def perfect_power(n: int) -> tuple[int, int] | None:
    """(a, b) with a**b == n and b >= 2, or None."""
    for b in range(2, n.bit_length() + 1):
        a = integer_root(n, b)
        if a > 1 and a**b == n:
            return a, b
    return None


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def factor(
    n: int,
    rng: np.random.Generator,
    max_attempts: int = 10,
    *,
    t: int | None = None,
    order_retries: int = 3,
    method: str = "auto",
) -> FactorResult:
    """Find a nontrivial factor pair of a composite n.

    Steps: even check, perfect-power check, random x (gcd shortcut), quantum
    order finding, then gcd(x^(r/2) +- 1, n). Odd orders and x^(r/2) = -1 mod n
    trigger a new x.
    """
    if n < 4 or is_prime(n):
        raise ValueError(f"{n} is not composite")
    if n > MAX_FACTOR_N:
        raise CapExceededError(f"n = {n} is beyond simulation scale ({MAX_FACTOR_N})")
    transcript: list[dict] = []
    if n % 2 == 0:
        transcript.append({"x": None, "r": None, "branch": "even"})
        return FactorResult(n, (2, n // 2), 0, transcript)
    pp = perfect_power(n)
    if pp is not None:
        a, _ = pp
        transcript.append({"x": None, "r": None, "branch": "perfect-power"})
        return FactorResult(n, (a, n // a), 0, transcript)

    for attempt in range(1, max_attempts + 1):
        x = int(rng.integers(2, n))
        g = math.gcd(x, n)
        if g > 1:
            transcript.append({"x": x, "r": None, "branch": "gcd-shortcut"})
            return FactorResult(n, tuple(sorted((g, n // g))), attempt, transcript)
        for _ in range(order_retries):
            run = quantum_order_finding(x, n, t, rng, method=method)
            r = run.candidate_r
            entry = {"x": x, "k": run.outcome_k, "r": r}
            if r is None:
                transcript.append(entry | {"branch": "no-candidate"})
                continue
            verified = mod_pow(x, r, n) == 1
            if r % 2 == 0:
                y = mod_pow(x, r // 2, n)
                for cand in (math.gcd(y + 1, n), math.gcd(y - 1, n)):
                    if 1 < cand < n:
                        branch = "success" if verified else "success-unverified-order"
                        transcript.append(entry | {"branch": branch})
                        return FactorResult(n, tuple(sorted((cand, n // cand))), attempt, transcript)
            if not verified:
                transcript.append(entry | {"branch": "wrong-order"})
                continue
            transcript.append(entry | {"branch": "odd-order" if r % 2 else "trivial-root"})
            break
    raise AlgorithmFailure(f"no factor of {n} found in {max_attempts} attempts")


def power_table(x: int, N: int, count: int) -> list[int]:
    """The series m_k = x**k mod N for k = 0..count-1."""
    return [mod_pow(x, k, N) for k in range(count)]
