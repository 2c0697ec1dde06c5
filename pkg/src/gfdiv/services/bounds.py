"""Operational bounds built on (G,f)-divergences and (G,f)-information.

Bounds echo their hypotheses in ``side_conditions`` instead of re-verifying
subadditivity on every call.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from gfdiv.config import DEFAULT_SEED
from gfdiv.core.models import BoundResult, SolverOpts
from gfdiv.core.probcore import Channel, Dist
from gfdiv.exceptions import ConvexityRequiredError, ParameterRangeError, SizeMismatchError
from gfdiv.generators import numeric
from gfdiv.generators.descriptors import AdmissiblePair, FGenerator
from gfdiv.services.divergence import f_div, gf_div, kl_div
from gfdiv.services.information import max_igf_over_input

logger = logging.getLogger(__name__)

SLACK_TOL = 1e-10
_ZERO_INFORMATION = 1e-12


class Direction(StrEnum):
    PLUS = "PLUS"
    MINUS = "MINUS"


def _check_fano_inputs(pair: AdmissiblePair, M: int, eps: float) -> None:
    if M < 2:
        raise ParameterRangeError("The message set needs M >= 2.", details=f"M={M}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterRangeError("The error probability must lie in [0, 1].")
    if not pair.g.convex:
        raise ConvexityRequiredError(
            f"The Fano-type bound needs a convex G; {pair.g.name!r} is not.",
            details=pair.label,
        )


def fano_lower(pair: AdmissiblePair, M: int, eps: float) -> BoundResult:
    """``G((1/M)·f(M(1-ε)) + ((M-1)/M)·f(Mε/(M-1)))``; ``f(0)`` comes from the stored limit."""
    _check_fano_inputs(pair, M, eps)
    f = pair.f
    inner = f.value_at(M * (1.0 - eps)) / M + (M - 1) / M * f.value_at(M * eps / (M - 1))
    value = pair.g.scalar(inner)
    return BoundResult(
        value=value,
        inputs_echo={"pair": pair.label, "M": M, "eps": eps, "inner": inner},
        side_conditions={"g_convex": True, "finite": math.isfinite(value)},
    )


def _capacity(W: Channel, pair: AdmissiblePair, opts: SolverOpts | None) -> tuple[float, Dist]:
    return max_igf_over_input(W, pair, opts)


def _blocklength_from(
    fano: BoundResult, capacity: float, best_input: Dist, subadditive_assumed: bool
) -> BoundResult:
    useless = capacity <= _ZERO_INFORMATION
    value = math.inf if useless else fano.value / capacity
    return BoundResult(
        value=value,
        inputs_echo={
            **fano.inputs_echo,
            "fano": fano.value,
            "capacity": capacity,
            "input": [float(v) for v in best_input.probs],
        },
        side_conditions={
            "g_convex": True,
            "pair_subadditive_assumed": subadditive_assumed,
            "zero_information": useless,
        },
    )


def blocklength_lower(
    pair: AdmissiblePair,
    M: int,
    eps: float,
    W: Channel,
    opts: SolverOpts | None = None,
    subadditive_assumed: bool = True,
) -> BoundResult:
    """Converse ``n ≥ Fano(M, ε) / max_p I_{G,f}(p, W)``."""
    fano = fano_lower(pair, M, eps)
    capacity, best_input = _capacity(W, pair, opts)
    result = _blocklength_from(fano, capacity, best_input, subadditive_assumed)
    logger.info(
        "Blocklength converse evaluated",
        extra={"pair": pair.label, "M": M, "eps": eps, "value": result.value},
    )
    return result


def blocklength_table(
    pair: AdmissiblePair,
    W: Channel,
    Ms: Sequence[int],
    epsilons: Sequence[float],
    opts: SolverOpts | None = None,
    subadditive_assumed: bool = True,
) -> list[BoundResult]:
    """Row-major grid over ``Ms × epsilons``; the channel maximum is computed once."""
    capacity, best_input = _capacity(W, pair, opts)
    return [
        _blocklength_from(fano_lower(pair, M, eps), capacity, best_input, subadditive_assumed)
        for M in Ms
        for eps in epsilons
    ]


def ht_bound_check(
    pair: AdmissiblePair,
    p: Dist,
    q: Dist,
    n: int,
    alpha: float,
    beta: float,
    subadditive_assumed: bool = True,
) -> BoundResult:
    """Slack ``n·𝒟(p‖q) - 𝒟(Bern(α)‖Bern(β))`` for acceptance rates α, β."""
    if n < 1:
        raise ParameterRangeError("The sample size must be positive.")
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ParameterRangeError("Test probabilities must lie in [0, 1].")
    single = gf_div(p, q, pair)
    achieved = gf_div(Dist.bernoulli(alpha), Dist.bernoulli(beta), pair)
    if math.isinf(single) and math.isinf(achieved):
        slack = 0.0
    else:
        slack = n * single - achieved
    return BoundResult(
        value=slack,
        inputs_echo={
            "pair": pair.label,
            "n": n,
            "alpha": alpha,
            "beta": beta,
            "single_letter": single,
            "test_divergence": achieved,
        },
        side_conditions={
            "pair_subadditive_assumed": subadditive_assumed,
            "consistent": slack >= -SLACK_TOL,
        },
    )


def simulate_threshold_test(
    p: Dist,
    q: Dist,
    n: int,
    threshold: float,
    trials: int = 1_000_000,
    seed: int = DEFAULT_SEED,
) -> tuple[float, float]:
    """Acceptance rates of "decide p when the log-likelihood ratio ≥ threshold".

    Returns ``(α, β)``: the share of accepted samples drawn under ``p`` and under ``q``.
    """
    if p.n != q.n:
        raise SizeMismatchError("Hypotheses must share an alphabet.")
    rng = np.random.default_rng(seed)
    with np.errstate(divide="ignore"):
        llr = np.log(p.probs) - np.log(q.probs)
    llr = np.where(np.isnan(llr), 0.0, llr)

    def acceptance(law: Dist) -> float:
        counts = rng.multinomial(n, law.probs, size=trials)
        used = counts > 0
        with np.errstate(invalid="ignore"):
            stats = np.sum(np.where(used, counts * llr, 0.0), axis=1)
        return float(np.mean(stats >= threshold))

    alpha = acceptance(p)
    beta = acceptance(q)
    logger.debug(
        "Threshold test simulated", extra={"n": n, "trials": trials, "alpha": alpha, "beta": beta}
    )
    return alpha, beta


def _envelope_holds(f: FGenerator, s: float, c: float, direction: Direction) -> bool:
    grid = numeric.log_grid(1e-3, 1e3, 400)
    values = f(grid)
    envelope = c * np.power(grid, s)
    slack = 1e-9 * np.maximum(1.0, np.abs(envelope))
    if direction is Direction.PLUS:
        return bool(np.all(values >= envelope - slack))
    return bool(np.all(values <= envelope + slack))


def kl_comparison(
    f: FGenerator, s: float, c: float, p: Dist, q: Dist, direction: Direction
) -> BoundResult:
    """Slack ``bound - D_KL(p‖q)`` of the power-envelope comparison.

    PLUS (``f ≥ c·x^s``, ``s > 1``): bound ``log D_f / (s-1)``.
    MINUS (``f ≤ c·x^s``, ``0 < s < 1``): bound ``-log D_f / (1-s)``, i.e.
    ``-log(1 - D_{1-f})`` with ``G = -log(1-x)``; the reading
    ``-log(1 - D_f)/(1-s)`` is echoed as ``direct_bound``.
    """
    if direction is Direction.PLUS and not s > 1.0:
        raise ParameterRangeError("The PLUS comparison needs s > 1.")
    if direction is Direction.MINUS and not 0.0 < s < 1.0:
        raise ParameterRangeError("The MINUS comparison needs 0 < s < 1.")
    envelope = _envelope_holds(f, s, c, direction)
    if not envelope:
        logger.warning(
            "Power envelope violated on the sample grid",
            extra={"generator": f.name, "s": s, "direction": direction.value},
        )

    d_f = f_div(p, q, f)
    kl = kl_div(p, q)
    echo: dict[str, object] = {"generator": f.name, "s": s, "c": c, "direction": direction.value}
    if direction is Direction.PLUS:
        bound = math.log(d_f) / (s - 1.0) if d_f > 0.0 else -math.inf
    else:
        bound = -math.log(d_f) / (1.0 - s) if d_f > 0.0 else math.inf
        direct = -math.log1p(-d_f) / (1.0 - s) if d_f < 1.0 else math.inf
        echo.update(convention="hat", direct_bound=direct)

    slack = 0.0 if math.isinf(bound) and math.isinf(kl) else bound - kl
    echo.update(bound=bound, kl=kl, d_f=d_f)
    return BoundResult(
        value=slack,
        inputs_echo=echo,
        side_conditions={"envelope_holds": envelope, "bound_holds": slack >= -SLACK_TOL},
    )
