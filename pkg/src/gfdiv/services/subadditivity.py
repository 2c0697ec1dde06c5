"""Divergence- and information-subadditivity: gaps, binary scans and the Υ(ε) curve.

Gap convention: ``gap = 𝒟(qY‖rY) + 𝒟(qZ‖rZ) - 𝒟(qY×qZ‖rY×rZ)``; a non-negative
gap means the inequality holds at that point.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import qmc

from gfdiv.config import DEFAULT_SEED, get_settings
from gfdiv.core.models import ScanReport, SolverOpts, Verdict
from gfdiv.core.probcore import Channel, Dist, product_dist
from gfdiv.exceptions import ParameterRangeError, SizeMismatchError
from gfdiv.generators.descriptors import AdmissiblePair
from gfdiv.services.divergence import f_div_batch, gf_div
from gfdiv.services.information import info_gap

logger = logging.getLogger(__name__)

_INCONCLUSIVE_SHARE = 0.01
_EDGE = 1e-12


def combine_gap(first: np.ndarray, second: np.ndarray, joint: np.ndarray) -> np.ndarray:
    """``first + second - joint`` under extended-real rules; never NaN.

    ``inf - inf`` counts as 0 (the inequality holds with equality at infinity),
    ``finite - inf`` is ``-inf``.
    """
    total = np.asarray(first, dtype=float) + np.asarray(second, dtype=float)
    joint = np.asarray(joint, dtype=float)
    with np.errstate(invalid="ignore"):
        gap = total - joint
    both_infinite = np.isposinf(joint) & np.isposinf(total)
    return np.where(both_infinite, 0.0, gap)


def div_gap(pair: AdmissiblePair, qY: Dist, rY: Dist, qZ: Dist, rZ: Dist) -> float:
    if qY.n != rY.n or qZ.n != rZ.n:
        raise SizeMismatchError("Each divergence needs operands on a common alphabet.")
    joint = gf_div(product_dist(qY, qZ), product_dist(rY, rZ), pair)
    gap = combine_gap(gf_div(qY, rY, pair), gf_div(qZ, rZ, pair), joint)
    return float(gap)


def binary_gap_at(pair: AdmissiblePair, x: float, y: float, r: float, s: float) -> float:
    """Gap at ``rY = Bern(x), qY = Bern(y), rZ = Bern(r), qZ = Bern(s)``."""
    qY, rY = Dist.bernoulli(y), Dist.bernoulli(x)
    return div_gap(pair, qY, rY, Dist.bernoulli(s), Dist.bernoulli(r))


def _bernoulli_rows(a: np.ndarray) -> np.ndarray:
    return np.stack([a, 1.0 - a], axis=-1)


def binary_gaps(pair: AdmissiblePair, points: np.ndarray) -> np.ndarray:
    """Vectorized gaps for rows ``(x, y, r, s)``."""
    x, y, r, s = (points[:, k] for k in range(4))
    rY, qY = _bernoulli_rows(x), _bernoulli_rows(y)
    rZ, qZ = _bernoulli_rows(r), _bernoulli_rows(s)
    qYZ = (qY[:, :, None] * qZ[:, None, :]).reshape(-1, 4)
    rYZ = (rY[:, :, None] * rZ[:, None, :]).reshape(-1, 4)
    g, f = pair.g, pair.f
    return combine_gap(
        g(f_div_batch(qY, rY, f)), g(f_div_batch(qZ, rZ, f)), g(f_div_batch(qYZ, rYZ, f))
    )


def lattice_points(grid_res: int) -> np.ndarray:
    """Open grid ``{1/(res+1), ..., res/(res+1)}⁴`` in lexicographic order."""
    levels = np.arange(1, grid_res + 1, dtype=float) / (grid_res + 1)
    mesh = np.meshgrid(levels, levels, levels, levels, indexing="ij")
    return np.stack([axis.reshape(-1) for axis in mesh], axis=1)


def sobol_points(count: int, seed: int) -> np.ndarray:
    if count <= 0:
        return np.empty((0, 4))
    sampler = qmc.Sobol(d=4, scramble=True, seed=seed)
    drawn = sampler.random_base2(m=max(1, math.ceil(math.log2(count))))[:count]
    return np.clip(drawn, _EDGE, 1.0 - _EDGE)


def _chunk_minimum(
    pair: AdmissiblePair, chunk: np.ndarray
) -> tuple[float, tuple[float, ...], int]:
    gaps = binary_gaps(pair, chunk)
    nonfinite = int(np.count_nonzero(~np.isfinite(gaps)))
    lowest = float(np.min(gaps))
    tied = chunk[gaps == lowest]
    witness = min(tuple(float(v) for v in row) for row in tied)
    return lowest, witness, nonfinite


def binary_gap_scan(
    pair: AdmissiblePair,
    grid_res: int = 25,
    random_samples: int = 100_000,
    seed: int = DEFAULT_SEED,
    tol: float | None = None,
    threads: int | None = None,
) -> ScanReport:
    if grid_res < 2:
        raise ParameterRangeError("binary_gap_scan needs grid_res >= 2.")
    settings = get_settings()
    tol = settings.scan_tol if tol is None else tol
    threads = threads or settings.threads

    points = np.vstack([lattice_points(grid_res), sobol_points(random_samples, seed)])
    size = settings.scan_chunk_size
    chunks = [points[start : start + size] for start in range(0, len(points), size)]

    def evaluate(chunk: np.ndarray) -> tuple[float, tuple[float, ...], int]:
        return _chunk_minimum(pair, chunk)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(evaluate, chunks))
    else:
        partials = [evaluate(chunk) for chunk in chunks]

    min_gap, witness, _ = min(partials, key=lambda item: (item[0], item[1]))
    nonfinite = sum(item[2] for item in partials)
    if nonfinite > _INCONCLUSIVE_SHARE * len(points):
        verdict = Verdict.INCONCLUSIVE
    elif min_gap >= -tol:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL

    report = ScanReport(
        target=f"divergence_subadditivity{pair.label}",
        min_gap=min_gap,
        witness=witness,
        samples=len(points),
        grid_res=grid_res,
        tol=tol,
        verdict=verdict,
        notes={"sobol_samples": int(random_samples), "nonfinite": nonfinite, "seed": seed},
    )
    log = logger.warning if verdict is Verdict.INCONCLUSIVE else logger.info
    log(
        "Binary gap scan finished",
        extra={"pair": pair.label, "verdict": verdict.value, "min_gap": min_gap},
    )
    return report


def equivalence_curve(
    pair: AdmissiblePair,
    qY: Dist,
    rY: Dist,
    qZ: Dist,
    rZ: Dist,
    eps_grid: Sequence[float],
    opts: SolverOpts | None = None,
) -> list[float]:
    """``Υ(ε) = I(X;Y) + I(X;Z) - I(X;YZ)`` with ``P(X=0) = ε``.

    Input 0 emits ``(qY, qZ)``, input 1 emits ``(rY, rZ)``, and the two outputs are
    conditionally independent given ``X``.
    """
    if any(not 0.0 <= eps <= 1.0 for eps in eps_grid):
        raise ParameterRangeError("Mixture weights must lie in [0, 1].")
    first = Channel([qY, rY])
    second = Channel([qZ, rZ])
    values = [info_gap(pair, Dist.bernoulli(eps), first, second, opts) for eps in eps_grid]
    logger.debug("Equivalence curve evaluated", extra={"pair": pair.label, "points": len(values)})
    return values
