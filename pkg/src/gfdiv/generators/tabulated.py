"""Generators given as ``{"table": [[x, f(x)], ...]}`` and JSON generator specs."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np
from scipy.interpolate import PchipInterpolator

from gfdiv.exceptions import SpecParseError
from gfdiv.generators.descriptors import Curvature, FGenerator, NormTag
from gfdiv.generators.registry import catalog_lookup

logger = logging.getLogger(__name__)


def tabulated_generator(
    table: Sequence[Sequence[float]],
    name: str = "tabulated",
    curvature: Curvature = Curvature.CONVEX,
) -> FGenerator:
    """Monotone cubic interpolant of the table, extended linearly past both ends."""
    points = np.asarray(table, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 3:
        raise SpecParseError("A generator table needs at least three [x, f(x)] rows.")
    order = np.argsort(points[:, 0])
    xs, ys = points[order, 0], points[order, 1]
    if np.any(np.diff(xs) <= 0.0) or xs[0] < 0.0:
        raise SpecParseError("Table abscissae must be distinct and non-negative.")

    interpolant = PchipInterpolator(xs, ys, extrapolate=False)
    slope = interpolant.derivative(1)
    curvature_fn = interpolant.derivative(2)
    lo, hi = xs[0], xs[-1]
    slope_lo, slope_hi = float(slope(lo)), float(slope(hi))

    def fn(x: np.ndarray) -> np.ndarray:
        inside = interpolant(np.clip(x, lo, hi))
        below = ys[0] + slope_lo * (x - lo)
        above = ys[-1] + slope_hi * (x - hi)
        return np.where(x < lo, below, np.where(x > hi, above, inside))

    def d1(x: np.ndarray) -> np.ndarray:
        inside = slope(np.clip(x, lo, hi))
        return np.where(x < lo, slope_lo, np.where(x > hi, slope_hi, inside))

    def d2(x: np.ndarray) -> np.ndarray:
        inside = curvature_fn(np.clip(x, lo, hi))
        return np.where((x < lo) | (x > hi), 0.0, inside)

    f0 = float(ys[0] - slope_lo * lo)
    at_one = float(fn(np.array([1.0]))[0])
    norm_tag = NormTag.ONE_AT_ONE if abs(at_one - 1.0) <= 1e-12 else NormTag.ZERO_AT_ONE
    logger.debug(
        "Tabulated generator built",
        extra={"generator": name, "rows": int(xs.size), "norm_tag": norm_tag.value},
    )
    return FGenerator(
        name=name,
        fn=fn,
        d1=d1,
        d2=d2,
        f0=f0,
        slope_inf=slope_hi,
        norm_tag=norm_tag,
        curvature=curvature,
    )


def generator_from_spec(spec: Mapping[str, Any] | str) -> Any:
    """Resolve ``{"name": ..., "params": {...}}`` or ``{"table": [...]}``."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecParseError("Malformed generator spec.", details=str(exc)) from exc
    if not isinstance(spec, Mapping):
        raise SpecParseError("A generator spec must be a JSON object.")
    if "table" in spec:
        curvature = Curvature(spec.get("curvature", Curvature.CONVEX.value))
        return tabulated_generator(spec["table"], spec.get("name", "tabulated"), curvature)
    if "name" not in spec:
        raise SpecParseError("A generator spec needs either 'name' or 'table'.")
    return catalog_lookup(spec["name"], spec.get("params") or {}, spec.get("kind"))
