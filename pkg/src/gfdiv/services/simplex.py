"""Mirror descent on the probability simplex with seeded multi-restart.

The update is ``q ← q·exp(-η∇)/Z``; accepted steps grow ``η``, rejected ones
halve it. Iterates are floored at ``FLOOR`` and renormalized.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from gfdiv.config import get_settings
from gfdiv.core.models import SolverOpts

logger = logging.getLogger(__name__)

FLOOR = 1e-12
_STEP_GROWTH = 1.2
_MIN_STEP = 1e-30

Objective = Callable[[np.ndarray], float]
Gradient = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SimplexRun:
    q: np.ndarray
    value: float
    iters: int


@dataclass(frozen=True)
class SimplexOutcome:
    q: np.ndarray
    value: float
    iters: int
    restarts_used: int
    certified_gap: float
    values: tuple[float, ...]


def floor_normalize(q: np.ndarray, floor: float = FLOOR) -> np.ndarray:
    q = np.maximum(np.asarray(q, dtype=float), floor)
    return q / np.sum(q)


def mirror_descent(
    objective: Objective,
    gradient: Gradient,
    q0: np.ndarray,
    *,
    max_iters: int,
    tol: float,
    stall_window: int,
) -> SimplexRun:
    q = floor_normalize(q0)
    value = objective(q)
    if not math.isfinite(value):
        return SimplexRun(q=q, value=value, iters=0)
    grad = gradient(q)
    spread = float(np.ptp(grad)) if np.all(np.isfinite(grad)) else 0.0
    step = 0.5 / max(spread, 1e-12)
    stall = 0
    iters = 0
    for iters in range(1, max_iters + 1):
        if not np.all(np.isfinite(grad)) or float(np.ptp(grad)) == 0.0:
            break
        shifted = grad - np.min(grad)
        candidate = floor_normalize(q * np.exp(-step * shifted))
        candidate_value = objective(candidate)
        if candidate_value < value:
            improvement = value - candidate_value
            q, value = candidate, candidate_value
            grad = gradient(q)
            step *= _STEP_GROWTH
            stall = stall + 1 if improvement < tol else 0
        else:
            step *= 0.5
            stall += 1
        if stall >= stall_window or step < _MIN_STEP:
            break
    return SimplexRun(q=q, value=value, iters=iters)


def kkt_residual(q: np.ndarray, grad: np.ndarray, support_tol: float = 1e-10) -> float:
    """Deviation from ``∇_y = λ`` on the support and ``∇_y ≥ λ`` off it."""
    if not np.all(np.isfinite(grad)):
        return math.inf
    multiplier = float(np.dot(q, grad))
    support = q > support_tol
    on = float(np.max(np.abs(grad[support] - multiplier))) if np.any(support) else 0.0
    off = float(np.max(multiplier - grad[~support], initial=0.0))
    return max(on, off)


def dirichlet_starts(n: int, count: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [rng.dirichlet(np.ones(n)) for _ in range(count)]


def resolve_threads(opts: SolverOpts) -> int:
    return opts.threads or get_settings().threads


def solve_with_restarts(
    objective: Objective,
    gradient: Gradient,
    warm_starts: Sequence[np.ndarray],
    opts: SolverOpts,
) -> SimplexOutcome:
    """Run every start; the best objective wins, ties go to the lowest start index."""
    n = int(np.asarray(warm_starts[0]).size)
    starts = list(warm_starts) + dirichlet_starts(n, opts.restarts, opts.seed)

    def run(start: np.ndarray) -> SimplexRun:
        return mirror_descent(
            objective,
            gradient,
            start,
            max_iters=opts.max_iters,
            tol=opts.tol,
            stall_window=opts.stall_window,
        )

    threads = resolve_threads(opts)
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(run, starts))
    else:
        runs = [run(start) for start in starts]

    for index, result in enumerate(runs):
        logger.debug(
            "Restart finished",
            extra={"restart": index, "value": result.value, "iters": result.iters},
        )

    best_index = min(range(len(runs)), key=lambda i: (runs[i].value, i))
    best = runs[best_index]
    finite = [r.value for r in runs if math.isfinite(r.value)]
    gap = (max(finite) - min(finite)) if finite else math.inf
    return SimplexOutcome(
        q=best.q,
        value=best.value,
        iters=best.iters,
        restarts_used=len(runs),
        certified_gap=gap,
        values=tuple(r.value for r in runs),
    )
