"""(G,f)-information of a channel and its maximization over inputs.

``I_{G,f}(X;Y) = min_q Σ_x p(x)·G(D_f(W(·|x)‖q))``. The inner minimum runs on the
shared simplex solver; the outer maximum over inputs uses exponentiated
supergradient ascent, which for ``(G, f) = (x, x log x)`` is the Blahut-Arimoto
update.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import rel_entr

from gfdiv.core.models import InfoResult, SolverOpts
from gfdiv.core.probcore import Channel, Dist, push_forward
from gfdiv.exceptions import NonFiniteObjectiveError, SizeMismatchError
from gfdiv.generators.descriptors import AdmissiblePair
from gfdiv.services.divergence import f_div_batch
from gfdiv.services.simplex import kkt_residual, solve_with_restarts

logger = logging.getLogger(__name__)

_FLAT_TOL = 1e-10
_CERTIFY_TOL = 1e-8
_OUTER_STALL = 10


class _InfoObjective:
    """``Φ(q)`` and its gradient for fixed input law and channel."""

    def __init__(self, p: np.ndarray, matrix: np.ndarray, pair: AdmissiblePair) -> None:
        active = p > 0.0
        self.weights = p[active]
        self.rows = matrix[active]
        self.pair = pair

    def row_values(self, q: np.ndarray) -> np.ndarray:
        """``G(D_f(W(·|x)‖q))`` for every active input."""
        return self.pair.g(f_div_batch(self.rows, q[None, :], self.pair.f))

    def __call__(self, q: np.ndarray) -> float:
        value = float(np.dot(self.weights, self.row_values(q)))
        return value if not math.isnan(value) else math.inf

    def gradient(self, q: np.ndarray) -> np.ndarray:
        f = self.pair.f
        divergences = f_div_batch(self.rows, q[None, :], f)
        outer = self.pair.g.d1(divergences)
        with np.errstate(all="ignore"):
            ratio = self.rows / q[None, :]
            positive = ratio > 0.0
            safe = np.where(positive, ratio, 1.0)
            fvals = np.where(positive, f.fn(safe), f.f0)
            tangent = np.where(positive, ratio * f.first_derivative()(safe), 0.0)
            partial = fvals - tangent
            return np.sum((self.weights * outer)[:, None] * partial, axis=0)


def compose(first: Channel, second: Channel) -> Channel:
    """Cascade ``x → first → y → second → z``: ``(W∘V)(z|x) = Σ_y V(z|y)·W(y|x)``."""
    if first.ny != second.nx:
        raise SizeMismatchError(
            "Cannot cascade channels with mismatched alphabets.",
            details=f"{first.ny} != {second.nx}",
        )
    return Channel(first.matrix @ second.matrix)


def parallel_channel(first: Channel, second: Channel) -> Channel:
    """``x ↦ (Y, Z)`` with ``Y ⊥ Z`` given ``x``; outputs flattened row-major."""
    if first.nx != second.nx:
        raise SizeMismatchError("Parallel channels must share the input alphabet.")
    rows = [np.outer(a, b).reshape(-1) for a, b in zip(first.matrix, second.matrix)]
    return Channel(rows)


def mutual_information(p: Dist, kernel: Channel) -> float:
    """Shannon mutual information in nats."""
    output = push_forward(p, kernel).probs
    per_row = np.sum(rel_entr(kernel.matrix, output[None, :]), axis=1)
    return float(np.dot(p.probs, per_row))


def igf_info(
    p: Dist,
    kernel: Channel,
    pair: AdmissiblePair,
    opts: SolverOpts | None = None,
    warm_start: Dist | None = None,
) -> InfoResult:
    opts = opts or SolverOpts()
    if p.n != kernel.nx:
        raise SizeMismatchError(
            "Input distribution does not match the channel.", details=f"{p.n} != {kernel.nx}"
        )
    objective = _InfoObjective(p.probs, kernel.matrix, pair)
    starts = [push_forward(p, kernel).probs]
    if warm_start is not None:
        starts.insert(0, warm_start.probs)

    outcome = solve_with_restarts(objective, objective.gradient, starts, opts)
    if not math.isfinite(outcome.value):
        raise NonFiniteObjectiveError(
            "Every candidate output distribution gives an infinite objective.",
            details=f"pair={pair.label}",
        )
    residual = kkt_residual(outcome.q, objective.gradient(outcome.q))
    result = InfoResult(
        value=outcome.value,
        argmin_q=tuple(float(v) for v in outcome.q),
        solver_iters=outcome.iters,
        restarts_used=outcome.restarts_used,
        certified_gap=outcome.certified_gap,
        kkt_residual=residual,
        certified=pair.g.convex and residual < _CERTIFY_TOL,
    )
    logger.debug(
        "I_{G,f} evaluated",
        extra={"pair": pair.label, "value": result.value, "kkt": residual},
    )
    return result


def max_igf_over_input(
    kernel: Channel, pair: AdmissiblePair, opts: SolverOpts | None = None
) -> tuple[float, Dist]:
    """Supremum of the concave map ``p ↦ I_{G,f}`` over the input simplex."""
    opts = opts or SolverOpts()
    uniform = Dist.uniform(kernel.nx)
    if opts.assume_permutation_invariant:
        return igf_info(uniform, kernel, pair, opts).value, uniform

    inner_opts = opts.model_copy(update={"restarts": 0})
    p = uniform.probs
    current = igf_info(uniform, kernel, pair, opts)
    best_value = current.value
    step = 1.0
    stall = 0
    rows = _InfoObjective(np.ones(kernel.nx), kernel.matrix, pair)
    for iteration in range(opts.outer_max_iters):
        supergradient = rows.row_values(np.asarray(current.argmin_q))
        if not np.all(np.isfinite(supergradient)):
            break
        candidate = p * np.exp(step * (supergradient - np.max(supergradient)))
        candidate = candidate / np.sum(candidate)
        trial = igf_info(Dist(candidate), kernel, pair, inner_opts, current.argmin)
        improvement = trial.value - best_value
        if improvement >= 0.0:
            p, current, best_value = candidate, trial, trial.value
            stall = stall + 1 if improvement < opts.tol else 0
        else:
            step *= 0.5
            stall += 1
        if stall >= _OUTER_STALL or step < 1e-12:
            logger.debug("Input ascent stopped", extra={"iteration": iteration, "step": step})
            break

    best = Dist(p)
    final = igf_info(best, kernel, pair, opts, current.argmin)
    value = final.value
    observed = [value, best_value] + [
        igf_info(Dist.point(kernel.nx, x), kernel, pair, inner_opts).value
        for x in range(kernel.nx)
    ]
    if max(observed) - min(observed) <= _FLAT_TOL:
        # flat objective: smallest vertex wins the tie
        return max(observed), Dist.point(kernel.nx, 0)
    logger.info(
        "Maximized I_{G,f} over inputs", extra={"pair": pair.label, "value": value}
    )
    return value, best


def info_gap(
    pair: AdmissiblePair,
    p: Dist,
    first: Channel,
    second: Channel,
    opts: SolverOpts | None = None,
) -> float:
    """``I(X;Y) + I(X;Z) - I(X;YZ)`` for conditionally independent outputs."""
    joint = parallel_channel(first, second)
    return (
        igf_info(p, first, pair, opts).value
        + igf_info(p, second, pair, opts).value
        - igf_info(p, joint, pair, opts).value
    )
