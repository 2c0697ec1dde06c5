"""Classical sphere-packing exponent through Gallager's E0 function.

Kept free of the (G,f) machinery: its own simplex optimizer (SLSQP) and its own
search over rho, so agreement with ``efsp`` is evidence rather than identity.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import minimize

from gfdiv.core.probcore import Channel, Dist
from gfdiv.exceptions import ParameterRangeError, SizeMismatchError

logger = logging.getLogger(__name__)

RHO_MAX = 100.0
_RHO_GRID = np.concatenate(([0.0], np.geomspace(1e-3, RHO_MAX, 80)))
_TERNARY_STEPS = 80


def gallager_e0(W: Channel, p: Dist, rho: float) -> float:
    """``E0(ρ, p) = -log Σ_y (Σ_x p(x)·W(y|x)^{1/(1+ρ)})^{1+ρ}``."""
    if p.n != W.nx:
        raise SizeMismatchError("Input law does not match the channel.")
    if rho < 0.0:
        raise ParameterRangeError("E0 needs rho >= 0.")
    return _e0(W.matrix, p.probs, rho)


def _e0(matrix: np.ndarray, p: np.ndarray, rho: float) -> float:
    inner = p @ np.power(matrix, 1.0 / (1.0 + rho))
    return float(-math.log(np.sum(np.power(inner, 1.0 + rho))))


def max_e0(W: Channel, rho: float) -> tuple[float, np.ndarray]:
    """Maximize ``E0(ρ, ·)`` over the simplex with SLSQP from the uniform law."""
    n = W.nx
    start = np.full(n, 1.0 / n)
    if rho == 0.0:
        return 0.0, start
    result = minimize(
        lambda p: -_e0(W.matrix, np.clip(p, 0.0, None), rho),
        start,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * n,
        constraints=({"type": "eq", "fun": lambda p: np.sum(p) - 1.0},),
        options={"ftol": 1e-14, "maxiter": 500},
    )
    p = np.clip(result.x, 0.0, None)
    p = p / np.sum(p)
    return _e0(W.matrix, p, rho), p


def classical_sp_oracle(W: Channel, R: float) -> float:
    """``sup_{ρ≥0} [max_p E0(ρ, p) - ρR]`` over ``ρ ∈ [0, 100]``."""
    if R <= 0.0:
        raise ParameterRangeError("The rate must be positive.")

    def bracket(rho: float) -> float:
        return max_e0(W, rho)[0] - rho * R

    values = [bracket(float(rho)) for rho in _RHO_GRID]
    k = int(np.argmax(values))
    lo = float(_RHO_GRID[max(k - 1, 0)])
    hi = float(_RHO_GRID[min(k + 1, len(_RHO_GRID) - 1)])
    best = values[k]
    for _ in range(_TERNARY_STEPS):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1, v2 = bracket(m1), bracket(m2)
        best = max(best, v1, v2)
        if v1 < v2:
            lo = m1
        else:
            hi = m2
    value = max(best, 0.0)
    logger.debug("Classical sphere-packing exponent", extra={"rate": R, "value": value})
    return value
