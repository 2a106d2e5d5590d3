"""Multi-start Nelder-Mead on top of scipy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the restarted simplex search.

    scipy's non-adaptive Nelder-Mead already uses reflection 1, expansion 2,
    contraction 1/2 and shrink 1/2. Random starts are drawn uniformly from
    ``[init_low, init_high)`` in every coordinate.
    """

    restarts: int = 20
    xatol: float = 1e-8
    fatol: float = 1e-8
    maxfev_per_dim: int = 2000
    init_low: float = 0.0
    init_high: float = np.pi

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one start")


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    nfev: int
    converged: bool
    starts: list[tuple[float, bool]] = field(default_factory=list, repr=False)


def multistart_minimize(
    f: Callable[[np.ndarray], float],
    dim: int,
    config: OptimizerConfig,
    rng: np.random.Generator,
    initial_points: Sequence[np.ndarray] = (),
) -> MinimizeResult:
    """Minimize ``f`` from the given points followed by random ones, ``config.restarts`` starts in total.

    Non-convergence is reported in the result, never raised.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    starts = [np.asarray(x, dtype=float) for x in initial_points][: config.restarts]
    for x in starts:
        if x.shape != (dim,):
            raise ValueError(f"initial point has shape {x.shape}, expected ({dim},)")
    while len(starts) < config.restarts:
        starts.append(rng.uniform(config.init_low, config.init_high, size=dim))
    options = {"xatol": config.xatol, "fatol": config.fatol, "maxfev": config.maxfev_per_dim * dim,
               "maxiter": config.maxfev_per_dim * dim}
    best = None
    total = 0
    record = []
    for x0 in starts:
        res = minimize(f, x0, method="Nelder-Mead", options=options)
        total += int(res.nfev)
        record.append((float(res.fun), bool(res.success)))
        if best is None or res.fun < best.fun:
            best = res
    return MinimizeResult(np.asarray(best.x), float(best.fun), total, bool(best.success), record)
