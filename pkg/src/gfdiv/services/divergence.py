"""f-divergences and their monotone transforms on finite alphabets.

Term conventions for ``Σ q·f(p/q)``:

- ``p = q = 0`` contributes 0;
- ``q = 0 < p`` contributes ``p·slope_inf`` (possibly ``inf``);
- ``p = 0 < q`` contributes ``q·f(0+)`` from the generator's stored limit.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import rel_entr

from gfdiv.core.probcore import Dist, is_abs_continuous
from gfdiv.exceptions import ParameterRangeError, SizeMismatchError
from gfdiv.generators.descriptors import AdmissiblePair, FGenerator

logger = logging.getLogger(__name__)


def _check_sizes(p: Dist, q: Dist) -> None:
    if p.n != q.n:
        raise SizeMismatchError(
            "Divergence operands live on different alphabets.", details=f"{p.n} != {q.n}"
        )


def divergence_terms(p: np.ndarray, q: np.ndarray, f: FGenerator) -> np.ndarray:
    """Per-symbol terms; ``p`` and ``q`` broadcast, the alphabet is the last axis."""
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    with np.errstate(all="ignore"):
        regular = q > 0.0
        ratio = np.divide(p, q, out=np.zeros_like(p), where=regular)
        positive = ratio > 0.0
        values = np.where(positive, f.fn(np.where(positive, ratio, 1.0)), f.f0)
        inside = q * values
        escaped = p * f.slope_inf
        return np.where(regular, inside, np.where(p > 0.0, escaped, 0.0))


def f_div_batch(p: np.ndarray, q: np.ndarray, f: FGenerator) -> np.ndarray:
    """Row-wise ``D_f`` for stacked distributions (shape ``(..., n)``)."""
    return np.sum(divergence_terms(p, q, f), axis=-1)


def f_div(p: Dist, q: Dist, f: FGenerator) -> float:
    _check_sizes(p, q)
    return float(np.sum(divergence_terms(p.probs, q.probs, f)))


def gf_div(p: Dist, q: Dist, pair: AdmissiblePair) -> float:
    """``G(D_f(p‖q))``; past the domain boundary the limit ``G(nu-)`` is returned."""
    return pair.g.scalar(f_div(p, q, pair.f))


def support_extension_used(p: Dist, q: Dist) -> bool:
    """True when some term needed the ``q = 0 < p`` extension."""
    return not is_abs_continuous(p, q)


def renyi_div(p: Dist, q: Dist, alpha: float) -> float:
    if alpha <= 0.0 or alpha == 1.0:
        raise ParameterRangeError("Rényi order must lie in (0,1)∪(1,∞).")
    _check_sizes(p, q)
    a, b = p.probs, q.probs
    with np.errstate(all="ignore"):
        both = (a > 0.0) & (b > 0.0)
        terms = np.where(both, np.power(a, alpha) * np.power(b, 1.0 - alpha), 0.0)
    escaped = bool(np.any((a > 0.0) & (b == 0.0)))
    if escaped and alpha > 1.0:
        return math.inf
    total = float(np.sum(terms))
    if total == 0.0:
        return math.inf
    return math.log(total) / (alpha - 1.0)


def kl_div(p: Dist, q: Dist) -> float:
    _check_sizes(p, q)
    return float(np.sum(rel_entr(p.probs, q.probs)))
