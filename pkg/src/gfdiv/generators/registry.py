"""Built-in catalog of generators, transforms and curvature shapes.

Every entry carries analytic derivatives. Parametric families validate their
parameters at construction and raise ``ParameterRangeError`` otherwise.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import replace
from typing import Any

import numpy as np

from gfdiv.exceptions import ParameterRangeError, UnknownGeneratorError
from gfdiv.generators.descriptors import (
    Curvature,
    FGenerator,
    GTransform,
    NormTag,
    ShapeFunction,
    as_zero_at_one,
    negate_shape,
)

Descriptor = FGenerator | GTransform | ShapeFunction
Factory = Callable[..., Descriptor]

_GENERATORS: dict[str, Factory] = {}
_TRANSFORMS: dict[str, Factory] = {}
_SHAPES: dict[str, Factory] = {}

_ASINH_ONE = math.asinh(1.0)


def _register(table: dict[str, Factory], name: str) -> Callable[[Factory], Factory]:
    def decorator(factory: Factory) -> Factory:
        table[name] = factory
        return factory

    return decorator


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterRangeError(message)


def _xlogx(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0.0, x * np.log(np.where(x > 0.0, x, 1.0)), 0.0)


# --- curvature shapes -------------------------------------------------------


@_register(_SHAPES, "power_shape")
def power_shape(coef: float = 1.0, gamma: float = 1.0) -> ShapeFunction:
    """``coef·x^gamma``; the T⁺/T⁻ equality families are special cases."""
    return ShapeFunction(
        name="power_shape",
        fn=lambda x: coef * np.power(x, gamma),
        d2=lambda x: coef * gamma * (gamma - 1.0) * np.power(x, gamma - 2.0),
        params={"coef": coef, "gamma": gamma},
    )


@_register(_SHAPES, "ratio_shape")
def ratio_shape(b: float = 2.0, c: float = 1.0) -> ShapeFunction:
    _require(c > 0.0, "ratio_shape needs c > 0.")
    return ShapeFunction(
        name="ratio_shape",
        fn=lambda x: (x + b) / (x + c),
        d2=lambda x: 2.0 * (b - c) / (x + c) ** 3,
        params={"b": b, "c": c},
    )


@_register(_SHAPES, "log1p_shape")
def log1p_shape() -> ShapeFunction:
    return ShapeFunction(
        name="log1p_shape", fn=np.log1p, d2=lambda x: -1.0 / (1.0 + x) ** 2
    )


@_register(_SHAPES, "cubic_rational_shape")
def cubic_rational_shape(k: float = 8.0) -> ShapeFunction:
    """``k·x²/(x+1)³``: triangular discrimination (k=8) and Le Cam (k=2)."""
    return ShapeFunction(
        name="cubic_rational_shape",
        fn=lambda x: k * x * x / (x + 1.0) ** 3,
        d2=lambda x: 2.0 * k * (x * x - 4.0 * x + 1.0) / (x + 1.0) ** 5,
        params={"k": k},
    )


@_register(_SHAPES, "sinusoidal_shape")
def sinusoidal_shape(kappa: float = 9.0, scale: float = 1.0 / 128.0) -> ShapeFunction:
    """``scale·√x·(kappa + sin log x)``."""
    _require(kappa >= 1.0, "sinusoidal_shape needs kappa >= 1 to stay non-negative.")

    def fn(x: np.ndarray) -> np.ndarray:
        return scale * np.sqrt(x) * (kappa + np.sin(np.log(x)))

    def d2(x: np.ndarray) -> np.ndarray:
        u = np.log(x)
        return -scale * np.sqrt(x) * (0.25 * kappa + 1.25 * np.sin(u)) / (x * x)

    return ShapeFunction(
        name="sinusoidal_shape", fn=fn, d2=d2, params={"kappa": kappa, "scale": scale}
    )


@_register(_SHAPES, "bounded_power_shape")
def bounded_power_shape(a: float | None = None, s: float = 0.75) -> ShapeFunction:
    """``a·x^s/(1 + x^(1-s))`` for ``1/2 < s < 1``."""
    _require(0.5 < s < 1.0, "bounded_power_shape needs 1/2 < s < 1.")
    ceiling = (1.0 - s) * min(s, 4.0 * s - 2.0)
    a = ceiling if a is None else a
    _require(0.0 < a <= ceiling, f"bounded_power_shape needs 0 < a <= {ceiling!r}.")

    def fn(x: np.ndarray) -> np.ndarray:
        return a * np.power(x, s) / (1.0 + np.power(x, 1.0 - s))

    def d2(x: np.ndarray) -> np.ndarray:
        w = np.power(x, 1.0 - s)
        ratio = w / (1.0 + w)
        log_slope = s - (1.0 - s) * ratio
        log_slope_prime = -((1.0 - s) ** 2) * ratio / (1.0 + w)
        return fn(x) * (log_slope**2 + log_slope_prime - log_slope) / (x * x)

    return ShapeFunction(name="bounded_power_shape", fn=fn, d2=d2, params={"a": a, "s": s})


@_register(_SHAPES, "cubic_plus_ratio_shape")
def cubic_plus_ratio_shape() -> ShapeFunction:
    """``6x³ + (x+1)/(x+2)``."""
    return ShapeFunction(
        name="cubic_plus_ratio_shape",
        fn=lambda x: 6.0 * x**3 + (x + 1.0) / (x + 2.0),
        d2=lambda x: 36.0 * x - 2.0 / (x + 2.0) ** 3,
    )


@_register(_SHAPES, "sin_quadratic_shape")
def sin_quadratic_shape() -> ShapeFunction:
    """``1 + sin x + 3x²``."""
    return ShapeFunction(
        name="sin_quadratic_shape",
        fn=lambda x: 1.0 + np.sin(x) + 3.0 * x * x,
        d2=lambda x: 6.0 - np.sin(x),
    )


# --- f-generators -----------------------------------------------------------


@_register(_GENERATORS, "kl")
def kl() -> FGenerator:
    return FGenerator(
        name="kl",
        fn=_xlogx,
        d1=lambda x: np.log(x) + 1.0,
        d2=lambda x: 1.0 / x,
        f0=0.0,
        slope_inf=math.inf,
        shape=ShapeFunction(name="x", fn=lambda x: x, d2=np.zeros_like),
    )


@_register(_GENERATORS, "reverse_kl")
def reverse_kl() -> FGenerator:
    return FGenerator(
        name="reverse_kl",
        fn=lambda x: -np.log(x),
        d1=lambda x: -1.0 / x,
        d2=lambda x: 1.0 / (x * x),
        f0=math.inf,
        slope_inf=0.0,
        shape=ShapeFunction(name="one", fn=np.ones_like, d2=np.zeros_like),
    )


@_register(_GENERATORS, "squared_hellinger")
def squared_hellinger() -> FGenerator:
    return FGenerator(
        name="squared_hellinger",
        fn=lambda x: (np.sqrt(x) - 1.0) ** 2,
        d1=lambda x: 1.0 - 1.0 / np.sqrt(x),
        d2=lambda x: 0.5 * np.power(x, -1.5),
        f0=1.0,
        slope_inf=1.0,
        shape=ShapeFunction(
            name="sqrt/2",
            fn=lambda x: 0.5 * np.sqrt(x),
            d2=lambda x: -0.125 * np.power(x, -1.5),
        ),
    )


@_register(_GENERATORS, "jensen_shannon")
def jensen_shannon() -> FGenerator:
    def fn(x: np.ndarray) -> np.ndarray:
        return _xlogx(x) - (1.0 + x) * np.log((1.0 + x) / 2.0)

    return FGenerator(
        name="jensen_shannon",
        fn=fn,
        d1=lambda x: np.log(2.0 * x / (1.0 + x)),
        d2=lambda x: 1.0 / (x * (1.0 + x)),
        f0=math.log(2.0),
        slope_inf=math.log(2.0),
        shape=ShapeFunction(
            name="x/(1+x)", fn=lambda x: x / (1.0 + x), d2=lambda x: -2.0 / (1.0 + x) ** 3
        ),
    )


@_register(_GENERATORS, "alpha_divergence")
def alpha_divergence(alpha: float = 0.5) -> FGenerator:
    _require(0.0 < alpha < 1.0, "alpha_divergence needs 0 < alpha < 1.")
    scale = 1.0 / (alpha * (alpha - 1.0))
    return FGenerator(
        name="alpha_divergence",
        fn=lambda x: scale * (np.power(x, alpha) - 1.0),
        d1=lambda x: np.power(x, alpha - 1.0) / (alpha - 1.0),
        d2=lambda x: np.power(x, alpha - 2.0),
        f0=-scale,
        slope_inf=0.0,
        params={"alpha": alpha},
        shape=power_shape(coef=1.0, gamma=alpha),
    )


@_register(_GENERATORS, "pearson_chi2")
def pearson_chi2() -> FGenerator:
    return FGenerator(
        name="pearson_chi2",
        fn=lambda x: (x - 1.0) ** 2,
        d1=lambda x: 2.0 * (x - 1.0),
        d2=lambda x: np.full_like(x, 2.0),
        f0=1.0,
        slope_inf=math.inf,
        shape=power_shape(coef=2.0, gamma=2.0),
    )


@_register(_GENERATORS, "triangular")
def triangular() -> FGenerator:
    return FGenerator(
        name="triangular",
        fn=lambda x: (x - 1.0) ** 2 / (x + 1.0),
        d1=lambda x: 1.0 - 4.0 / (x + 1.0) ** 2,
        d2=lambda x: 8.0 / (x + 1.0) ** 3,
        f0=1.0,
        slope_inf=1.0,
        shape=cubic_rational_shape(k=8.0),
    )


@_register(_GENERATORS, "le_cam")
def le_cam() -> FGenerator:
    return FGenerator(
        name="le_cam",
        fn=lambda x: (1.0 - x) / (2.0 * x + 2.0),
        d1=lambda x: -1.0 / (x + 1.0) ** 2,
        d2=lambda x: 2.0 / (x + 1.0) ** 3,
        f0=0.5,
        slope_inf=0.0,
        shape=cubic_rational_shape(k=2.0),
    )


@_register(_GENERATORS, "hellinger_order")
def hellinger_order(alpha: float = 2.0) -> FGenerator:
    """``(x^alpha - 1)/(alpha - 1)``, the generator behind the Rényi transform."""
    _require(alpha > 0.0 and alpha != 1.0, "hellinger_order needs alpha in (0,1)∪(1,∞).")
    return FGenerator(
        name="hellinger_order",
        fn=lambda x: (np.power(x, alpha) - 1.0) / (alpha - 1.0),
        d1=lambda x: alpha * np.power(x, alpha - 1.0) / (alpha - 1.0),
        d2=lambda x: alpha * np.power(x, alpha - 2.0),
        f0=1.0 / (1.0 - alpha),
        slope_inf=math.inf if alpha > 1.0 else 0.0,
        params={"alpha": alpha},
        shape=power_shape(coef=alpha, gamma=alpha),
    )


@_register(_GENERATORS, "power")
def power(p: float = 2.0) -> FGenerator:
    """``x^p`` on the f(1)=1 track; concave for ``0 < p < 1``."""
    _require(p > 0.0, "power needs p > 0.")
    if p > 1.0:
        slope = math.inf
    elif p == 1.0:
        slope = 1.0
    else:
        slope = 0.0
    return FGenerator(
        name="power",
        fn=lambda x: np.power(x, p),
        d1=lambda x: p * np.power(x, p - 1.0),
        d2=lambda x: p * (p - 1.0) * np.power(x, p - 2.0),
        f0=0.0,
        slope_inf=slope,
        norm_tag=NormTag.ONE_AT_ONE,
        curvature=Curvature.CONCAVE if p < 1.0 else Curvature.CONVEX,
        params={"p": p},
        shape=power_shape(coef=p * (p - 1.0), gamma=p),
    )


@_register(_GENERATORS, "kl_envelope")
def kl_envelope(s: float = 2.0, theta: float = 1.0) -> FGenerator:
    """``x^s - (s/θ)x^θ + s/θ``; bounded below by ``x^s/2`` for ``θ ≤ 1 < s ≤ 2θ``."""
    _require(1.0 < s <= 2.0 * theta, "kl_envelope needs 1 < s <= 2·theta.")
    _require(theta <= 1.0, "kl_envelope needs theta <= 1 to stay convex.")
    ratio = s / theta
    return FGenerator(
        name="kl_envelope",
        fn=lambda x: np.power(x, s) - ratio * np.power(x, theta) + ratio,
        d1=lambda x: s * np.power(x, s - 1.0) - s * np.power(x, theta - 1.0),
        d2=lambda x: s * (s - 1.0) * np.power(x, s - 2.0)
        - s * (theta - 1.0) * np.power(x, theta - 2.0),
        f0=ratio,
        slope_inf=math.inf,
        norm_tag=NormTag.ONE_AT_ONE,
        params={"s": s, "theta": theta, "c": 0.5},
    )


@_register(_GENERATORS, "sqrt")
def sqrt() -> FGenerator:
    return power(p=0.5)


@_register(_GENERATORS, "one_minus_sqrt")
def one_minus_sqrt() -> FGenerator:
    """Convex partner of ``√x``; with ``-log(1-x)`` it yields the Bhattacharyya distance."""
    return replace(as_zero_at_one(sqrt()), name="one_minus_sqrt")


@_register(_GENERATORS, "sinusoidal_concave")
def sinusoidal_concave() -> FGenerator:
    """``√x·(45 + sin log x)/160 + (115/160)x`` on the concave f(1)=1 track."""

    def fn(x: np.ndarray) -> np.ndarray:
        safe = np.where(x > 0.0, x, 1.0)
        wave = np.sqrt(x) * (45.0 + np.sin(np.log(safe)))
        return wave / 160.0 + 115.0 / 160.0 * x

    def d1(x: np.ndarray) -> np.ndarray:
        u = np.log(x)
        return (45.0 + np.sin(u) + 2.0 * np.cos(u)) / (320.0 * np.sqrt(x)) + 115.0 / 160.0

    return FGenerator(
        name="sinusoidal_concave",
        fn=fn,
        d1=d1,
        d2=lambda x: -(9.0 + np.sin(np.log(x))) / (128.0 * np.power(x, 1.5)),
        f0=0.0,
        slope_inf=115.0 / 160.0,
        norm_tag=NormTag.ONE_AT_ONE,
        curvature=Curvature.CONCAVE,
        shape=negate_shape(sinusoidal_shape(kappa=9.0, scale=1.0 / 128.0)),
    )


# --- G-transforms -----------------------------------------------------------


@_register(_TRANSFORMS, "x")
def identity_transform() -> GTransform:
    return GTransform(
        name="x", fn=lambda x: x, d1=np.ones_like, convex=True, inverse=lambda y: y
    )


@_register(_TRANSFORMS, "x_pow")
def power_transform(p: float = 0.5) -> GTransform:
    _require(0.0 < p <= 1.0, "x_pow needs 0 < p <= 1.")
    return GTransform(
        name="x_pow",
        fn=lambda x: np.power(x, p),
        d1=lambda x: p * np.power(x, p - 1.0),
        convex=p == 1.0,
        inverse=lambda y: np.power(y, 1.0 / p),
        params={"p": p},
    )


@_register(_TRANSFORMS, "log1p")
def log1p_transform() -> GTransform:
    return GTransform(
        name="log1p",
        fn=np.log1p,
        d1=lambda x: 1.0 / (1.0 + x),
        convex=False,
        inverse=np.expm1,
    )


@_register(_TRANSFORMS, "neg_log1m")
def neg_log1m_transform() -> GTransform:
    return GTransform(
        name="neg_log1m",
        fn=lambda x: -np.log1p(-x),
        d1=lambda x: 1.0 / (1.0 - x),
        nu=1.0,
        convex=True,
        inverse=lambda y: -np.expm1(-y),
        at_nu=math.inf,
    )


@_register(_TRANSFORMS, "log_sinh")
def log_sinh_transform() -> GTransform:
    """``log(sinh(x + asinh 1))``, zero at the origin."""
    return GTransform(
        name="log_sinh",
        fn=lambda x: np.log(np.sinh(x + _ASINH_ONE)),
        d1=lambda x: 1.0 / np.tanh(x + _ASINH_ONE),
        convex=False,
        inverse=lambda y: np.arcsinh(np.exp(y)) - _ASINH_ONE,
    )


@_register(_TRANSFORMS, "renyi_G")
def renyi_transform(alpha: float = 2.0) -> GTransform:
    """``log(1 + (α-1)x)/(α-1)``; maps Hellinger-order divergences to Rényi ones."""
    _require(alpha > 0.0 and alpha != 1.0, "renyi_G needs alpha in (0,1)∪(1,∞).")
    shift = alpha - 1.0
    return GTransform(
        name="renyi_G",
        fn=lambda x: np.log1p(shift * x) / shift,
        d1=lambda x: 1.0 / (1.0 + shift * x),
        nu=math.inf if alpha > 1.0 else 1.0 / (1.0 - alpha),
        convex=alpha < 1.0,
        inverse=lambda y: np.expm1(shift * y) / shift,
        at_nu=math.inf,
        params={"alpha": alpha},
    )


@_register(_TRANSFORMS, "exp_minus_one")
def exp_minus_one_transform() -> GTransform:
    return GTransform(
        name="exp_minus_one", fn=np.expm1, d1=np.exp, convex=True, inverse=np.log1p
    )


# --- lookup -----------------------------------------------------------------


def _build(table: Mapping[str, Factory], name: str, params: Mapping[str, Any]) -> Descriptor:
    factory = table[name]
    try:
        return factory(**{key: float(value) for key, value in params.items()})
    except TypeError as exc:
        raise ParameterRangeError(
            f"Unsupported parameters for {name!r}.", details=str(exc)
        ) from exc


def catalog_lookup(
    name: str, params: Mapping[str, Any] | None = None, kind: str | None = None
) -> Descriptor:
    """Resolve a registry entry; ``kind`` disambiguates between f, G and shape tables."""
    params = params or {}
    tables = {"f": _GENERATORS, "g": _TRANSFORMS, "shape": _SHAPES}
    search = [tables[kind]] if kind else list(tables.values())
    for table in search:
        if name in table:
            return _build(table, name, params)
    raise UnknownGeneratorError(f"Unknown registry entry {name!r}.", details=f"kind={kind}")


def lookup_generator(name: str, **params: float) -> FGenerator:
    return catalog_lookup(name, params, kind="f")  # type: ignore[return-value]


def lookup_transform(name: str, **params: float) -> GTransform:
    return catalog_lookup(name, params, kind="g")  # type: ignore[return-value]


def lookup_shape(name: str, **params: float) -> ShapeFunction:
    return catalog_lookup(name, params, kind="shape")  # type: ignore[return-value]


def registry_names() -> dict[str, tuple[str, ...]]:
    return {
        "f": tuple(sorted(_GENERATORS)),
        "g": tuple(sorted(_TRANSFORMS)),
        "shape": tuple(sorted(_SHAPES)),
    }
