"""Descriptors for f-generators, G-transforms, curvature shapes and admissible pairs.

Every descriptor wraps vectorized callables (``numpy`` arrays in, arrays out).
Limits at the boundary of ``[0, ∞)`` are stored explicitly so divergence code
never evaluates ``0·∞``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from types import MappingProxyType
from typing import Any

import numpy as np

from gfdiv.exceptions import (
    DomainViolationError,
    IndeterminateLimitError,
    InvalidGeneratorError,
    InvalidTransformError,
    MissingDerivativeError,
)
from gfdiv.generators import numeric

logger = logging.getLogger(__name__)

RealFn = Callable[[np.ndarray], np.ndarray]


class NormTag(StrEnum):
    ZERO_AT_ONE = "ZERO_AT_ONE"
    ONE_AT_ONE = "ONE_AT_ONE"


class Curvature(StrEnum):
    CONVEX = "CONVEX"
    CONCAVE = "CONCAVE"


def _vectorized(fn: RealFn) -> RealFn:
    def wrapped(x: Any) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)

    return wrapped


@dataclass(frozen=True)
class ShapeFunction:
    """A curvature shape ``g`` together with its second derivative."""

    name: str
    fn: RealFn
    d2: RealFn | None = None
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "fn", _vectorized(self.fn))
        second = self.d2 if self.d2 is not None else numeric.derivative(self.fn, order=2)
        object.__setattr__(self, "d2", _vectorized(second))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __call__(self, x: Any) -> np.ndarray:
        return self.fn(x)


@dataclass(frozen=True)
class FGenerator:
    """Generator ``f`` of an f-divergence on ``[0, ∞)``.

    ``f0`` and ``slope_inf`` are ``f(0+)`` and ``lim f(t)/t``; ``None`` asks for
    numerical resolution at construction, which may yield ``INDETERMINATE`` (nan).
    """

    name: str
    fn: RealFn
    d1: RealFn | None = None
    d2: RealFn | None = None
    f0: float | None = None
    slope_inf: float | None = None
    norm_tag: NormTag = NormTag.ZERO_AT_ONE
    curvature: Curvature = Curvature.CONVEX
    params: Mapping[str, float] = field(default_factory=dict)
    shape: ShapeFunction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "fn", _vectorized(self.fn))
        if self.d1 is not None:
            object.__setattr__(self, "d1", _vectorized(self.d1))
        if self.d2 is not None:
            object.__setattr__(self, "d2", _vectorized(self.d2))
        if self.f0 is None:
            object.__setattr__(self, "f0", numeric.value_at_origin(self.fn))
        if self.slope_inf is None:
            object.__setattr__(self, "slope_inf", numeric.slope_at_infinity(self.fn))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __call__(self, t: Any) -> np.ndarray:
        return self.fn(t)

    def value_at(self, t: float) -> float:
        """Scalar evaluation using the stored limit at the origin."""
        if t == 0.0:
            return float(self.f0)
        return float(self.fn(np.array([t]))[0])

    @property
    def has_analytic_d2(self) -> bool:
        return self.d2 is not None

    def first_derivative(self) -> RealFn:
        return self.d1 if self.d1 is not None else numeric.derivative(self.fn, order=1)

    def second_derivative(self) -> RealFn:
        return self.d2 if self.d2 is not None else numeric.derivative(self.fn, order=2)


@dataclass(frozen=True)
class GTransform:
    """Non-decreasing transform ``G`` on ``[0, nu)`` with ``G(0) = 0``."""

    name: str
    fn: RealFn
    d1: RealFn
    nu: float = math.inf
    convex: bool = False
    inverse: RealFn | None = None
    at_nu: float = math.inf
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "fn", _vectorized(self.fn))
        object.__setattr__(self, "d1", _vectorized(self.d1))
        if self.inverse is not None:
            object.__setattr__(self, "inverse", _vectorized(self.inverse))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def __call__(self, x: Any) -> np.ndarray:
        """Evaluate with the domain guard: arguments at or past ``nu`` map to ``G(nu-)``."""
        x = np.asarray(x, dtype=float)
        beyond = x >= self.nu
        inside = np.where(beyond, 0.0, np.maximum(x, 0.0))
        return np.where(beyond, self.at_nu, self.fn(inside))

    def scalar(self, x: float) -> float:
        return float(self(np.array([x]))[0])


@dataclass(frozen=True)
class AdmissiblePair:
    g: GTransform
    f: FGenerator
    dm: float

    @property
    def label(self) -> str:
        return f"({self.g.name}, {self.f.name})"


def dm_of(f: FGenerator) -> float:
    """``f(0) + lim f(t)/t``; ``inf`` when either diverges, nan when unresolved."""
    f0, slope = float(f.f0), float(f.slope_inf)
    if numeric.is_indeterminate(f0) or numeric.is_indeterminate(slope):
        return numeric.INDETERMINATE
    return f0 + slope


def make_pair(g: GTransform, f: FGenerator) -> AdmissiblePair:
    if f.norm_tag is not NormTag.ZERO_AT_ONE or f.curvature is not Curvature.CONVEX:
        raise DomainViolationError(
            f"Generator {f.name!r} is not a convex f(1)=0 generator.",
            details="convert with as_zero_at_one() before pairing",
        )
    dm = dm_of(f)
    if numeric.is_indeterminate(dm):
        raise IndeterminateLimitError(
            f"D_m({f.name}) could not be resolved numerically; pair rejected."
        )
    if dm > g.nu:
        raise DomainViolationError(
            f"D_m({f.name}) = {dm!r} exceeds the domain supremum of {g.name} ({g.nu!r}).",
        )
    logger.debug("Admissible pair built", extra={"g": g.name, "f": f.name, "dm": dm})
    return AdmissiblePair(g=g, f=f, dm=dm)


def _negated(fn: RealFn | None) -> RealFn | None:
    if fn is None:
        return None
    return lambda x: -fn(x)


def negate_shape(shape: ShapeFunction | None) -> ShapeFunction | None:
    """Shape of the negated generator, ``-g`` with ``-g''``."""
    if shape is None:
        return None
    return ShapeFunction(
        name=f"-{shape.name}", fn=lambda x: -shape.fn(x), d2=lambda x: -shape.d2(x)
    )


def as_zero_at_one(f: FGenerator) -> FGenerator:
    """Map a ONE_AT_ONE generator to the f(1)=0 track.

    Convex generators become ``f - 1``; concave ones become the convex ``1 - f``.
    """
    if f.norm_tag is NormTag.ZERO_AT_ONE:
        return f
    if f.curvature is Curvature.CONVEX:
        base = f.fn
        return replace(
            f,
            name=f"{f.name}-1",
            fn=lambda x: base(x) - 1.0,
            f0=float(f.f0) - 1.0,
            norm_tag=NormTag.ZERO_AT_ONE,
        )
    base = f.fn
    return replace(
        f,
        name=f"1-{f.name}",
        fn=lambda x: 1.0 - base(x),
        d1=_negated(f.d1),
        d2=_negated(f.d2),
        f0=1.0 - float(f.f0),
        slope_inf=-float(f.slope_inf),
        norm_tag=NormTag.ZERO_AT_ONE,
        curvature=Curvature.CONVEX,
        shape=negate_shape(f.shape),
    )


def as_one_at_one(f_hat: FGenerator, curvature: Curvature) -> FGenerator:
    """Inverse of :func:`as_zero_at_one` for the requested track."""
    if f_hat.norm_tag is NormTag.ONE_AT_ONE:
        return f_hat
    base = f_hat.fn
    if curvature is Curvature.CONVEX:
        return replace(
            f_hat,
            name=f"{f_hat.name}+1",
            fn=lambda x: base(x) + 1.0,
            f0=float(f_hat.f0) + 1.0,
            norm_tag=NormTag.ONE_AT_ONE,
        )
    return replace(
        f_hat,
        name=f"1-{f_hat.name}",
        fn=lambda x: 1.0 - base(x),
        d1=_negated(f_hat.d1),
        d2=_negated(f_hat.d2),
        f0=1.0 - float(f_hat.f0),
        slope_inf=-float(f_hat.slope_inf),
        norm_tag=NormTag.ONE_AT_ONE,
        curvature=Curvature.CONCAVE,
        shape=negate_shape(f_hat.shape),
    )


def curvature_shape(f: FGenerator) -> ShapeFunction:
    """``g(x) = x² f''(x)``; analytic when the generator carries its shape."""
    if f.shape is not None:
        return f.shape
    if f.d2 is None:
        logger.info("Falling back to finite differences", extra={"generator": f.name})
    second = f.second_derivative()
    return ShapeFunction(name=f"x^2*{f.name}''", fn=lambda x: x * x * second(x))


def require_second_derivative(f: FGenerator, allow_fallback: bool = True) -> RealFn:
    if f.d2 is None and not allow_fallback:
        raise MissingDerivativeError(f"Generator {f.name!r} has no second derivative.")
    return f.second_derivative()


def _midpoint_pairs(lo: float, hi: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    grid = numeric.log_grid(lo, hi, points)
    i, j = np.triu_indices(points, k=1)
    return grid[i], grid[j]


def validate_generator(
    f: FGenerator, lo: float = 1e-4, hi: float = 1e4, points: int = 200
) -> None:
    """Check normalization and sampled midpoint convexity (or concavity)."""
    expected = 0.0 if f.norm_tag is NormTag.ZERO_AT_ONE else 1.0
    at_one = f.value_at(1.0)
    if abs(at_one - expected) > 1e-12:
        raise InvalidGeneratorError(
            f"Generator {f.name!r} gives f(1) = {at_one!r}, expected {expected}."
        )
    a, b = _midpoint_pairs(lo, hi, points)
    gaps = numeric.midpoint_gaps(f.fn, a, b)
    scale = np.maximum(1.0, 0.5 * np.abs(f.fn(a) + f.fn(b)))
    if f.curvature is Curvature.CONVEX:
        violation = gaps > 1e-9 * scale
    else:
        violation = gaps < -1e-9 * scale
    if np.any(violation):
        k = int(np.argmax(violation))
        raise InvalidGeneratorError(
            f"Generator {f.name!r} fails sampled midpoint {f.curvature.value.lower()}ity.",
            details=f"a={a[k]!r}, b={b[k]!r}",
        )


def transform_grid(g: GTransform, points: int = 2000) -> np.ndarray:
    """Interior sample grid of the domain ``(0, nu)``."""
    if math.isinf(g.nu):
        return numeric.log_grid(1e-4, 1e4, points)
    return np.linspace(g.nu * 1e-4, g.nu * (1.0 - 1e-4), points)


def validate_transform(g: GTransform) -> None:
    zero = float(g.fn(np.zeros(1))[0])
    if abs(zero) > 1e-12:
        raise InvalidTransformError(f"Transform {g.name!r} gives G(0) = {zero!r}.")
    grid = np.concatenate(([0.0], transform_grid(g)))
    values = g.fn(grid)
    if np.any(np.diff(values) < -1e-12 * np.maximum(1.0, np.abs(values[1:]))):
        raise InvalidTransformError(f"Transform {g.name!r} decreases on its domain.")
