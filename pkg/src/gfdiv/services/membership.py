"""Sufficient conditions for subadditivity, checked numerically on sampled grids.

Each checker returns a :class:`ScanReport` whose ``min_gap`` is a normalized slack
(negative means violated) and whose witness replays through the matching
``*_gap_at`` helper.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from gfdiv.config import get_settings
from gfdiv.core.models import ScanReport, Verdict
from gfdiv.core.probcore import Dist
from gfdiv.exceptions import InvalidTransformError, ParameterRangeError, SizeMismatchError
from gfdiv.generators import numeric
from gfdiv.generators.descriptors import (
    FGenerator,
    GTransform,
    ShapeFunction,
    curvature_shape,
    transform_grid,
)
from gfdiv.generators.registry import lookup_generator
from gfdiv.services.divergence import divergence_terms

logger = logging.getLogger(__name__)

RealFn = Callable[[np.ndarray], np.ndarray]

ROOT_GRID = (1e-6, 1e6, 10_000)


@dataclass(frozen=True)
class TableRow:
    label: str
    generator: str
    params: dict[str, float] = field(default_factory=dict)
    expected: bool = True


TABLE_ONE: tuple[TableRow, ...] = (
    TableRow("KL divergence", "kl"),
    TableRow("Reverse KL", "reverse_kl"),
    TableRow("Squared Hellinger", "squared_hellinger"),
    TableRow("Jensen-Shannon", "jensen_shannon"),
    TableRow("alpha-divergence (0.5)", "alpha_divergence", {"alpha": 0.5}),
    TableRow("Pearson chi2", "pearson_chi2", expected=False),
    TableRow("Triangular", "triangular", expected=False),
    TableRow("Le Cam", "le_cam", expected=False),
)
TABLE_TWO: tuple[TableRow, ...] = (
    TableRow("Pearson chi2", "pearson_chi2"),
    TableRow("Triangular", "triangular", expected=False),
    TableRow("Le Cam", "le_cam", expected=False),
)


def _verdict(min_gap: float, tol: float) -> Verdict:
    return Verdict.PASS if min_gap >= -tol else Verdict.FAIL


def _concavity_gaps(fn: RealFn, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Midpoint gaps scaled by ``max(1, |chord|)``."""
    with np.errstate(all="ignore"):
        chord = 0.5 * (fn(a) + fn(b))
    return numeric.midpoint_gaps(fn, a, b) / np.maximum(1.0, np.abs(chord))


def concavity_gap_at(fn: RealFn, a: float, b: float) -> float:
    return float(_concavity_gaps(fn, np.array([a]), np.array([b]))[0])


def _grid_pairs(grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(grid.size, k=1)
    return grid[i], grid[j]


def _random_pairs(lo: float, hi: float, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    logs = rng.uniform(math.log(lo), math.log(hi), size=(2, count))
    return np.exp(logs[0]), np.exp(logs[1])


def check_T(f: FGenerator, tol: float | None = None, seed: int | None = None) -> ScanReport:
    """Class T: ``g(x) = x²f''(x)`` non-negative and concave on ``(0, ∞)``."""
    settings = get_settings()
    tol = settings.scan_tol if tol is None else tol
    seed = settings.seed if seed is None else seed
    shape = curvature_shape(f)
    lo, hi = settings.membership_lo, settings.membership_hi
    grid = numeric.log_grid(lo, hi, settings.membership_points)

    values = shape(grid)
    finite = values[np.isfinite(values)]
    if finite.size < values.size:
        logger.warning("Shape not finite on the whole grid", extra={"generator": f.name})
    lowest = int(np.argmin(np.where(np.isfinite(values), values, np.inf)))
    notes = {"shape": shape.name, "lo": lo, "hi": hi, "random_pairs": 0}
    samples = grid.size

    if values[lowest] < -tol:
        report = ScanReport(
            target=f"class_T.nonnegativity[{f.name}]",
            min_gap=float(values[lowest]),
            witness=(float(grid[lowest]),),
            samples=samples,
            grid_res=grid.size,
            tol=tol,
            verdict=Verdict.FAIL,
            notes=notes,
        )
    else:
        grid_a, grid_b = _grid_pairs(grid)
        rand_a, rand_b = _random_pairs(lo, hi, settings.membership_random_pairs, seed)
        a = np.concatenate([grid_a, rand_a])
        b = np.concatenate([grid_b, rand_b])
        gaps = _concavity_gaps(shape.fn, a, b)
        gaps = np.where(np.isnan(gaps), np.inf, gaps)
        k = int(np.argmin(gaps))
        min_gap = float(gaps[k])
        notes["random_pairs"] = int(rand_a.size)
        report = ScanReport(
            target=f"class_T.concavity[{f.name}]",
            min_gap=min_gap,
            witness=(float(a[k]), float(b[k])),
            samples=samples + int(a.size),
            grid_res=grid.size,
            tol=tol,
            verdict=_verdict(min_gap, tol),
            notes=notes,
        )

    logger.info(
        "Class T check finished",
        extra={"generator": f.name, "verdict": report.verdict.value, "min_gap": report.min_gap},
    )
    return report


def _product_residuals(
    g: ShapeFunction, x: np.ndarray, alpha: np.ndarray, sign: float
) -> np.ndarray:
    with np.errstate(all="ignore"):
        product = g(alpha) * g(x / alpha)
        residual = x * x * g.d2(x) + sign * product
        return -residual / (1.0 + np.abs(product))


def tplus_gap_at(g: ShapeFunction, x: float, alpha: float) -> float:
    return float(_product_residuals(g, np.array([x]), np.array([alpha]), -1.0)[0])


def tminus_gap_at(g: ShapeFunction, x: float, alpha: float) -> float:
    return float(_product_residuals(g, np.array([x]), np.array([alpha]), 1.0)[0])


def _product_scan(g: ShapeFunction, sign: float, label: str, tol: float | None) -> ScanReport:
    settings = get_settings()
    tol = settings.scan_tol if tol is None else tol
    points = settings.tplus_points
    axis = numeric.log_grid(1e-3, 1e3, points)
    x, alpha = np.meshgrid(axis, axis, indexing="ij")
    gaps = _product_residuals(g, x.ravel(), alpha.ravel(), sign)
    gaps = np.where(np.isnan(gaps), np.inf, gaps)
    k = int(np.argmin(gaps))
    min_gap = float(gaps[k])
    report = ScanReport(
        target=f"{label}[{g.name}]",
        min_gap=min_gap,
        witness=(float(x.ravel()[k]), float(alpha.ravel()[k])),
        samples=int(gaps.size),
        grid_res=points,
        tol=tol,
        verdict=_verdict(min_gap, tol),
        notes={"max_abs_residual": float(np.max(np.abs(gaps[np.isfinite(gaps)])))},
    )
    logger.info(
        "Product inequality check finished",
        extra={"target": report.target, "verdict": report.verdict.value},
    )
    return report


def check_Tplus(g: ShapeFunction, tol: float | None = None) -> ScanReport:
    """``x²g''(x) ≤ g(α)·g(x/α)`` on a log grid of ``(x, α)``."""
    return _product_scan(g, -1.0, "class_Tplus", tol)


def check_Tminus(g: ShapeFunction, tol: float | None = None) -> ScanReport:
    """``x²g''(x) ≤ -g(α)·g(x/α)`` on the same grid."""
    return _product_scan(g, 1.0, "class_Tminus", tol)


def inverse_derivative(g: GTransform) -> RealFn:
    def u(x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 1.0 / g.d1(x)

    return u


def check_inv_gprime_concave(g: GTransform, tol: float | None = None) -> ScanReport:
    """Midpoint concavity of ``u = 1/G'`` on the interior of the domain of ``G``."""
    settings = get_settings()
    tol = settings.scan_tol if tol is None else tol
    grid = transform_grid(g, settings.membership_points)
    slopes = g.d1(grid)
    bad = np.isnan(slopes) | (slopes <= 0.0)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise InvalidTransformError(
            f"Transform {g.name!r} has a non-positive derivative.",
            details=f"G'({grid[k]!r}) = {slopes[k]!r}",
        )
    a, b = _grid_pairs(grid)
    gaps = _concavity_gaps(inverse_derivative(g), a, b)
    gaps = np.where(np.isnan(gaps), np.inf, gaps)
    k = int(np.argmin(gaps))
    min_gap = float(gaps[k])
    report = ScanReport(
        target=f"inverse_derivative_concavity[{g.name}]",
        min_gap=min_gap,
        witness=(float(a[k]), float(b[k])),
        samples=int(gaps.size),
        grid_res=grid.size,
        tol=tol,
        verdict=_verdict(min_gap, tol),
    )
    logger.info(
        "1/G' concavity check finished",
        extra={"transform": g.name, "verdict": report.verdict.value},
    )
    return report


def _stationary_function(
    f: FGenerator, qZ: Dist, rZ: Dist, lam: float, a: float, b: float
) -> RealFn:
    if qZ.n != rZ.n:
        raise SizeMismatchError("qZ and rZ must share an alphabet.")
    if lam <= 0.0:
        raise ParameterRangeError("The multiplier lambda must be positive.")
    q, r = qZ.probs, rZ.probs

    def h(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        mixed = np.sum(divergence_terms(t[..., None] * q, r, f), axis=-1)
        with np.errstate(all="ignore"):
            return lam * f(t) - mixed - a - b * t

    return h


def locate_stationary_roots(
    f: FGenerator, qZ: Dist, rZ: Dist, lam: float, a: float, b: float
) -> list[float]:
    """Roots of ``λf(t) - Σ rZ·f(t·qZ/rZ) - a - b·t`` found by sign changes plus brentq."""
    h = _stationary_function(f, qZ, rZ, lam, a, b)
    lo, hi, points = ROOT_GRID
    grid = numeric.log_grid(lo, hi, points)
    values = h(grid)

    roots: list[float] = []
    last_sign = 0.0
    last_t = math.nan
    for t, value in zip(grid, values):
        if not math.isfinite(value):
            continue
        sign = math.copysign(1.0, value) if value != 0.0 else 0.0
        if sign == 0.0:
            continue
        if last_sign != 0.0 and sign != last_sign:
            left, right = float(last_t), float(t)
            try:
                roots.append(float(brentq(lambda s: float(h(np.array(s))), left, right)))
            except ValueError:
                roots.append(math.sqrt(left * right))
        last_sign, last_t = sign, t
    logger.debug("Stationary roots located", extra={"generator": f.name, "roots": len(roots)})
    return roots


def count_stationary_roots(
    f: FGenerator, qZ: Dist, rZ: Dist, lam: float, a: float, b: float
) -> int:
    return len(locate_stationary_roots(f, qZ, rZ, lam, a, b))


def membership_matrix(which: str = "1") -> list[tuple[TableRow, ScanReport]]:
    """Verdict rows: class T for ``G = x`` (``"1"``) or T⁺ on ``x²f''`` for ``G = log(1+x)``."""
    if which == "1":
        return [(row, check_T(lookup_generator(row.generator, **row.params))) for row in TABLE_ONE]
    if which == "2":
        return [
            (row, check_Tplus(curvature_shape(lookup_generator(row.generator, **row.params))))
            for row in TABLE_TWO
        ]
    raise ParameterRangeError(f"Unknown membership table {which!r}.", details="use '1' or '2'")
