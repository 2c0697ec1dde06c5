"""Numerical fallbacks: finite differences and limit resolution by sampling."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np

RealFn = Callable[[np.ndarray], np.ndarray]

INDETERMINATE = math.nan
RELATIVE_STEP = 1e-5
LIMIT_RTOL = 1e-6
SLOPE_SAMPLES: tuple[float, ...] = (1e4, 1e6, 1e8)
ORIGIN_SAMPLES: tuple[float, ...] = (1e-4, 1e-6, 1e-8)


def is_indeterminate(value: float) -> bool:
    return math.isnan(value)


def _step(x: np.ndarray) -> np.ndarray:
    return RELATIVE_STEP * np.maximum(np.abs(x), 1e-8)


def _first_difference(fn: RealFn, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def _second_difference(fn: RealFn, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h)


def derivative(fn: RealFn, order: int = 1) -> RealFn:
    """Central difference with one Richardson extrapolation step."""
    if order not in (1, 2):
        raise ValueError("Only first and second derivatives are supported.")
    difference = _first_difference if order == 1 else _second_difference

    def approx(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        h = _step(x)
        coarse = difference(fn, x, h)
        fine = difference(fn, x, 0.5 * h)
        return (4.0 * fine - coarse) / 3.0

    return approx


def resolve_limit(samples: Sequence[float]) -> float:
    """Limit of a sampled sequence, ``inf`` when it grows without bound.

    Converged samples (last two within ``LIMIT_RTOL``) return the last value;
    geometrically shrinking increments are accelerated with Aitken's delta-squared;
    non-shrinking increasing increments mean divergence. Anything else is
    ``INDETERMINATE``.
    """
    values = [float(v) for v in samples]
    if any(math.isnan(v) for v in values):
        return INDETERMINATE
    if all(math.isinf(v) and v > 0 for v in values[-2:]):
        return math.inf
    if any(math.isinf(v) for v in values):
        return INDETERMINATE

    s0, s1, s2 = values[-3:]
    if abs(s2 - s1) <= LIMIT_RTOL * max(abs(s2), 1e-300) or s2 == s1:
        return s2
    d1, d2 = s1 - s0, s2 - s1
    if d1 > 0 and d2 > 0 and d2 >= 0.5 * d1:
        return math.inf
    if d1 != 0.0 and d1 * d2 > 0 and abs(d2) < abs(d1):
        accelerated = s2 - d2 * d2 / (d2 - d1)
        if abs(accelerated - s2) <= max(abs(d2), LIMIT_RTOL) * 10.0:
            return accelerated
    return INDETERMINATE


def slope_at_infinity(fn: RealFn) -> float:
    t = np.asarray(SLOPE_SAMPLES, dtype=float)
    with np.errstate(all="ignore"):
        return resolve_limit(fn(t) / t)


def value_at_origin(fn: RealFn) -> float:
    with np.errstate(all="ignore"):
        direct = fn(np.zeros(1))[0]
        if np.isfinite(direct):
            return float(direct)
        return resolve_limit(fn(np.asarray(ORIGIN_SAMPLES, dtype=float)))


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    return np.geomspace(lo, hi, points)


def midpoint_gaps(fn: RealFn, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``fn((a+b)/2) - (fn(a)+fn(b))/2``; non-negative everywhere iff concave on the pairs."""
    with np.errstate(all="ignore"):
        return fn(0.5 * (a + b)) - 0.5 * (fn(a) + fn(b))
