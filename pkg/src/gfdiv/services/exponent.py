"""Generalized sphere-packing exponent over an s-indexed family of generators.

For a family ``f_s`` on the f(1)=1 track, with ``μ_x(q) = log Σ_y W(y|x)·f_s(q_y/W(y|x))``::

    E(R) = sup_p sup_{0<s<1} inf_q [ -Σ_x p(x)·μ_x(q) - s·R ] / (1 - s)

The inner infimum runs mirror descent on ``Ψ(q) = -Σ_x p(x)·μ_x(q)``; the supremum
over inputs alternates with it by exponentiated ascent. Each point carries the
bracket ``[lower, upper]`` of that alternation.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from gfdiv.core.models import ExponentCurve, ExponentPoint, ScanReport, SolverOpts, Verdict
from gfdiv.core.probcore import Channel, Dist
from gfdiv.exceptions import DomainViolationError, ParameterRangeError, SizeMismatchError
from gfdiv.generators import numeric
from gfdiv.generators.descriptors import Curvature, FGenerator, NormTag
from gfdiv.generators.registry import lookup_generator
from gfdiv.services.divergence import f_div, f_div_batch
from gfdiv.services.simplex import mirror_descent, resolve_threads

logger = logging.getLogger(__name__)

S_GRID: tuple[float, ...] = tuple(round(0.01 * k, 2) for k in range(1, 100))
MAX_ROUNDS = 50
ROUND_TOL = 1e-9

Psi = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ExponentFamily:
    """``s ↦ f_s`` with the bounds ``a ≤ ψ_s ≤ b`` of its modulating factor."""

    name: str
    member: Callable[[float], FGenerator]
    psi_bounds: tuple[float, float] = (1.0, 1.0)

    def __call__(self, s: float) -> FGenerator:
        return self.member(s)


def power_family() -> ExponentFamily:
    """``f_s(t) = t^s``, the classical choice."""
    return ExponentFamily(name="power", member=lambda s: lookup_generator("power", p=s))


def psi_family(
    psi: Psi, name: str = "psi", psi_bounds: tuple[float, float] = (1.0, 1.0)
) -> ExponentFamily:
    """``f_s(t) = t^s·ψ_s(log t)`` for a bounded ``ψ`` with ``ψ_s(0) = 1``."""
    low, high = psi_bounds
    if not 0.0 < low <= high:
        raise ParameterRangeError("psi bounds must satisfy 0 < a <= b.")

    def member(s: float) -> FGenerator:
        def fn(t: np.ndarray) -> np.ndarray:
            safe = np.where(t > 0.0, t, 1.0)
            return np.where(t > 0.0, np.power(safe, s) * psi(s, np.log(safe)), 0.0)

        return FGenerator(
            name=f"{name}[s={s:g}]",
            fn=fn,
            f0=0.0,
            slope_inf=0.0,
            norm_tag=NormTag.ONE_AT_ONE,
            curvature=Curvature.CONCAVE,
            params={"s": s},
        )

    return ExponentFamily(name=name, member=member, psi_bounds=psi_bounds)


def mu_x(s: float, q: Dist, W: Channel, x: int, f_s: FGenerator) -> float:
    """``log D_{f_s}(q ‖ W(·|x))``."""
    if not 0.0 < s < 1.0:
        raise ParameterRangeError("mu_x needs 0 < s < 1.")
    if q.n != W.ny:
        raise SizeMismatchError("q must live on the channel output alphabet.")
    value = f_div(q, W.row(x), f_s)
    return math.log(value) if value > 0.0 else -math.inf


class _Bracket:
    """Objective pieces for fixed ``(s, R)``."""

    def __init__(self, W: Channel, f_s: FGenerator, s: float, rate: float) -> None:
        self.matrix = W.matrix
        self.f_s = f_s
        self.s = s
        self.rate = rate
        self.slope = f_s.first_derivative()

    def mus(self, q: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(f_div_batch(q[None, :], self.matrix, self.f_s))

    def psi(self, p: np.ndarray, q: np.ndarray) -> float:
        value = -float(np.dot(p, self.mus(q)))
        return value if not math.isnan(value) else math.inf

    def psi_gradient(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        totals = f_div_batch(q[None, :], self.matrix, self.f_s)
        with np.errstate(all="ignore"):
            slopes = self.slope(q[None, :] / self.matrix)
        return -np.sum((p / totals)[:, None] * slopes, axis=0)

    def value(self, psi_value: float) -> float:
        return (psi_value - self.s * self.rate) / (1.0 - self.s)

    def upper(self, q: np.ndarray) -> float:
        return self.value(float(np.max(-self.mus(q))))


@dataclass
class _SPoint:
    s: float
    lower: float
    upper: float
    p: np.ndarray
    q: np.ndarray
    converged: bool


def _solve_at_s(
    W: Channel,
    family: ExponentFamily,
    s: float,
    rate: float,
    p0: np.ndarray,
    q0: np.ndarray,
    opts: SolverOpts,
) -> _SPoint:
    """Alternate the inner infimum over q and exponentiated ascent over p."""
    bracket = _Bracket(W, family(s), s, rate)
    p, q = p0.copy(), q0.copy()
    best_lower, best_upper = -math.inf, math.inf
    best_p, best_q = p, q
    step = 1.0
    converged = False
    for _ in range(MAX_ROUNDS):
        run = mirror_descent(
            lambda v: bracket.psi(p, v),
            lambda v: bracket.psi_gradient(p, v),
            q,
            max_iters=opts.max_iters,
            tol=opts.tol,
            stall_window=opts.stall_window,
        )
        q = run.q
        lower = bracket.value(run.value)
        upper = bracket.upper(q)
        best_upper = min(best_upper, upper)
        if lower >= best_lower:
            best_lower, best_p, best_q = lower, p, q
        else:
            step *= 0.5
            p, q = best_p, best_q
        if best_upper - best_lower < ROUND_TOL:
            converged = True
            break
        gains = -bracket.mus(q)
        if not np.all(np.isfinite(gains)):
            break
        p = p * np.exp(step * (gains - np.max(gains)))
        p = p / np.sum(p)
    return _SPoint(s, best_lower, best_upper, best_p, best_q, converged)


def _check_channel(W: Channel, rate: float) -> None:
    if rate <= 0.0:
        raise ParameterRangeError("The rate must be positive.")
    if np.any(W.matrix <= 0.0):
        raise DomainViolationError(
            "The sphere-packing exponent needs a strictly positive transition matrix."
        )


def _grows_without_bound(values: Sequence[float]) -> bool:
    if len(values) < 3:
        return False
    a, b, c = values[-3:]
    return c > b > a and (c - b) >= (b - a)


def efsp(
    W: Channel,
    R: float,
    family: ExponentFamily | None = None,
    opts: SolverOpts | None = None,
) -> tuple[float, ExponentPoint]:
    """Exponent at rate ``R`` (nats) plus its certificate."""
    family = family or power_family()
    opts = opts or SolverOpts()
    _check_channel(W, R)
    p = np.full(W.nx, 1.0 / W.nx)
    q = np.full(W.ny, 1.0 / W.ny)

    scanned: list[_SPoint] = []
    for s in S_GRID:
        point = _solve_at_s(W, family, s, R, p, q, opts)
        scanned.append(point)
        p, q = point.p, point.q

    lowers = [point.lower for point in scanned]
    k = int(np.argmax(lowers))
    if k == len(scanned) - 1 and _grows_without_bound(lowers):
        logger.warning("Exponent bracket diverges as s -> 1", extra={"rate": R})
        diverged = ExponentPoint(
            rate=R, value=math.inf, s=scanned[k].s, lower=math.inf, upper=math.inf, converged=False
        )
        return math.inf, diverged

    best = scanned[k]
    lo = S_GRID[max(k - 1, 0)]
    hi = S_GRID[min(k + 1, len(S_GRID) - 1)]
    if hi > lo:
        refined = minimize_scalar(
            lambda s: -_solve_at_s(W, family, float(s), R, best.p, best.q, opts).lower,
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-6},
        )
        candidate = _solve_at_s(W, family, float(refined.x), R, best.p, best.q, opts)
        if candidate.lower > best.lower:
            best = candidate

    value = max(best.lower, 0.0)
    certificate = ExponentPoint(
        rate=R,
        value=value,
        s=best.s,
        input_dist=tuple(float(v) for v in best.p),
        output_dist=tuple(float(v) for v in best.q),
        lower=best.lower,
        upper=best.upper,
        converged=best.converged,
    )
    logger.info(
        "Sphere-packing exponent evaluated",
        extra={"rate": R, "value": value, "s": best.s, "converged": best.converged},
    )
    return value, certificate


def exponent_curve(
    W: Channel,
    rates: Sequence[float],
    family: ExponentFamily | None = None,
    opts: SolverOpts | None = None,
) -> ExponentCurve:
    """Independent ``efsp`` evaluations over a rate grid, in input order."""
    family = family or power_family()
    opts = opts or SolverOpts()
    threads = resolve_threads(opts)

    def evaluate(rate: float) -> tuple[float, ExponentPoint]:
        return efsp(W, float(rate), family, opts)

    if threads > 1 and len(rates) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, rates))
    else:
        results = [evaluate(rate) for rate in rates]

    return ExponentCurve(
        family=family.name,
        rate_grid=tuple(float(rate) for rate in rates),
        values=tuple(value for value, _ in results),
        per_point=tuple(point for _, point in results),
        psi_bounds=family.psi_bounds,
    )


def _phi(psi: Psi, s: float, u: np.ndarray) -> np.ndarray:
    k = (1.0 - 2.0 * s) / (s * (1.0 - s))

    def at(v: np.ndarray) -> np.ndarray:
        return psi(s, v)

    first = numeric.derivative(at, order=1)(u)
    second = numeric.derivative(at, order=2)(u)
    return at(u) + k * first - second / (s * (1.0 - s))


def check_psi_conditions(
    psi: Psi,
    s_grid: Sequence[float] = (0.1, 0.25, 0.5, 0.75, 0.9),
    x_grid: Sequence[float] | None = None,
    tol: float = 1e-6,
) -> ScanReport:
    """Numerical predicate for a modulating family ``ψ_s(u)``, ``u = log t``.

    Checks ``ψ_s(0) = 1``, ``φ_s ≥ 0`` and
    ``φ_s + k·φ_s' - φ_s''/(s(1-s)) ≥ φ_s(y)·φ_s(x-y)`` with
    ``φ_s = ψ_s + k·ψ_s' - ψ_s''/(s(1-s))`` and ``k = (1-2s)/(s(1-s))``.
    Derivatives of ``φ_s`` are taken on the sample grid.
    """
    grid = np.linspace(-4.0, 4.0, 161) if x_grid is None else np.asarray(x_grid, dtype=float)
    worst = (math.inf, "psi_conditions", (math.nan,))
    for s in s_grid:
        if not 0.0 < s < 1.0:
            raise ParameterRangeError("psi conditions need s in (0, 1).")
        k = (1.0 - 2.0 * s) / (s * (1.0 - s))
        origin = float(np.asarray(psi(s, np.zeros(1)))[0])
        gap = -abs(origin - 1.0)
        worst = min(worst, (gap, "psi_conditions.normalization", (s, 0.0)))

        phi = _phi(psi, s, grid)
        i = int(np.argmin(phi))
        worst = min(worst, (float(phi[i]), "psi_conditions.phi_nonnegative", (s, float(grid[i]))))

        phi_d1 = np.gradient(phi, grid, edge_order=2)
        phi_d2 = np.gradient(phi_d1, grid, edge_order=2)
        lhs = phi + k * phi_d1 - phi_d2 / (s * (1.0 - s))
        x, y = np.meshgrid(grid, grid, indexing="ij")
        product = _phi(psi, s, y.ravel()) * _phi(psi, s, (x - y).ravel())
        gaps = (np.repeat(lhs, grid.size) - product) / (1.0 + np.abs(product))
        j = int(np.argmin(gaps))
        witness = (s, float(x.ravel()[j]), float(y.ravel()[j]))
        worst = min(worst, (float(gaps[j]), "psi_conditions.product", witness))

    min_gap, target, witness = worst
    return ScanReport(
        target=target if min_gap < -tol else "psi_conditions",
        min_gap=min_gap,
        witness=witness,
        samples=len(s_grid) * grid.size * (grid.size + 1),
        grid_res=grid.size,
        tol=tol,
        verdict=Verdict.PASS if min_gap >= -tol else Verdict.FAIL,
    )
