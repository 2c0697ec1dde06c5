"""Finite-alphabet probability primitives.

Distributions and channels are immutable wrappers around read-only ``numpy``
arrays stored in natural (not log) scale. Products are flattened row-major so
product identities compare bit for bit.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from gfdiv.exceptions import InvalidDistributionError, SizeMismatchError, SpecParseError

_NEGATIVE_CLAMP = 1e-15
_RENORMALIZE_TOL = 1e-9


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _as_probability_vector(values: Sequence[float] | np.ndarray) -> np.ndarray:
    probs = np.array(values, dtype=float).reshape(-1)
    if probs.size == 0:
        raise InvalidDistributionError("A distribution needs at least one symbol.")
    if not np.all(np.isfinite(probs)):
        raise InvalidDistributionError("Probabilities must be finite.")
    if np.any(probs < -_NEGATIVE_CLAMP):
        raise InvalidDistributionError(
            "Probabilities must be non-negative.", details=f"min={probs.min()!r}"
        )
    probs = np.where(probs < 0.0, 0.0, probs)
    total = float(np.sum(probs))
    if abs(total - 1.0) >= _RENORMALIZE_TOL:
        raise InvalidDistributionError(
            "Probabilities must sum to 1.", details=f"sum={total!r}"
        )
    if total != 1.0:
        probs = probs / total
    return probs


@dataclass(frozen=True, eq=False)
class Dist:
    """Probability vector on ``{0, ..., n-1}``."""

    probs: np.ndarray

    def __init__(self, probs: Sequence[float] | np.ndarray) -> None:
        object.__setattr__(self, "probs", _frozen(_as_probability_vector(probs)))

    @property
    def n(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.probs.tolist())

    def __getitem__(self, index: int) -> float:
        return float(self.probs[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dist):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.probs, other.probs))

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())

    def __repr__(self) -> str:
        return f"Dist({self.probs.tolist()!r})"

    @classmethod
    def uniform(cls, n: int) -> Dist:
        if n < 1:
            raise InvalidDistributionError("Alphabet size must be positive.")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point(cls, n: int, index: int) -> Dist:
        probs = np.zeros(n)
        probs[index] = 1.0
        return cls(probs)

    @classmethod
    def bernoulli(cls, a: float) -> Dist:
        """Binary distribution with mass ``a`` on symbol 0."""
        if not 0.0 <= a <= 1.0:
            raise InvalidDistributionError("Bernoulli parameter must lie in [0, 1].")
        return cls([a, 1.0 - a])

    def to_json(self) -> str:
        return _format_vector(self.probs)

    @classmethod
    def from_json(cls, raw: str | Sequence[float]) -> Dist:
        values = _loads(raw) if isinstance(raw, str) else raw
        return cls(values)


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic kernel ``W(y|x)``; row ``x`` is the law of the output given ``x``."""

    matrix: np.ndarray

    def __init__(self, rows: Sequence[Sequence[float]] | Sequence[Dist] | np.ndarray) -> None:
        if isinstance(rows, np.ndarray):
            raw_rows = list(rows)
        else:
            raw_rows = [row.probs if isinstance(row, Dist) else row for row in rows]
        if not raw_rows:
            raise InvalidDistributionError("A channel needs at least one input symbol.")
        normalized = [_as_probability_vector(row) for row in raw_rows]
        widths = {row.size for row in normalized}
        if len(widths) != 1:
            raise SizeMismatchError(
                "All channel rows must share the output alphabet.",
                details=f"widths={sorted(widths)}",
            )
        object.__setattr__(self, "matrix", _frozen(np.vstack(normalized)))

    @property
    def nx(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def ny(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def rows(self) -> tuple[Dist, ...]:
        return tuple(Dist(row) for row in self.matrix)

    def row(self, x: int) -> Dist:
        return Dist(self.matrix[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Channel):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(
            np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.matrix.shape, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"Channel({self.matrix.tolist()!r})"

    @classmethod
    def from_rows(cls, *rows: Sequence[float] | Dist) -> Channel:
        """``Channel.from_rows(row0, row1, ...)``; each row is validated like a ``Dist``."""
        return cls(list(rows))

    @classmethod
    def identity(cls, n: int) -> Channel:
        return cls(np.eye(n))

    @classmethod
    def bsc(cls, delta: float) -> Channel:
        if not 0.0 <= delta <= 1.0:
            raise InvalidDistributionError("Crossover probability must lie in [0, 1].")
        return cls([[1.0 - delta, delta], [delta, 1.0 - delta]])

    @classmethod
    def bec(cls, erasure: float) -> Channel:
        """Binary erasure channel with outputs ordered (0, erasure, 1)."""
        if not 0.0 <= erasure <= 1.0:
            raise InvalidDistributionError("Erasure probability must lie in [0, 1].")
        return cls([[1.0 - erasure, erasure, 0.0], [0.0, erasure, 1.0 - erasure]])

    def to_json(self) -> str:
        return "[" + ", ".join(_format_vector(row) for row in self.matrix) + "]"

    @classmethod
    def from_json(cls, raw: str | Sequence[Sequence[float]]) -> Channel:
        values = _loads(raw) if isinstance(raw, str) else raw
        return cls(values)


def _format_vector(values: np.ndarray) -> str:
    return "[" + ", ".join(f"{float(v):.17g}" for v in values) + "]"


def _loads(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecParseError("Malformed JSON array.", details=str(exc)) from exc


def _require_same_size(a: Dist, b: Dist) -> None:
    if a.n != b.n:
        raise SizeMismatchError(
            "Distributions live on different alphabets.", details=f"{a.n} != {b.n}"
        )


def product_dist(a: Dist, b: Dist) -> Dist:
    """Product law; entry ``(i, j)`` sits at flat index ``i * |b| + j``."""
    return Dist(np.outer(a.probs, b.probs).reshape(-1))


def push_forward(p: Dist, kernel: Channel) -> Dist:
    if p.n != kernel.nx:
        raise SizeMismatchError(
            "Input distribution does not match the channel input alphabet.",
            details=f"{p.n} != {kernel.nx}",
        )
    return Dist(p.probs @ kernel.matrix)


def is_abs_continuous(p: Dist, q: Dist) -> bool:
    """True iff ``q(x) = 0`` implies ``p(x) = 0``."""
    _require_same_size(p, q)
    return not bool(np.any((q.probs == 0.0) & (p.probs > 0.0)))


def product_channel(first: Channel, second: Channel) -> Channel:
    """Memoryless pair ``K1 ⊗ K2`` with inputs and outputs flattened row-major."""
    return Channel(np.kron(first.matrix, second.matrix))


def joint_from(p: Dist, kernel: Channel) -> np.ndarray:
    """Joint law ``p(x) W(y|x)`` as an ``nx × ny`` array."""
    if p.n != kernel.nx:
        raise SizeMismatchError("Input distribution does not match the channel.")
    return p.probs[:, None] * kernel.matrix


def marginal(joint: Dist, shape: tuple[int, ...], axis: int) -> Dist:
    """Marginal of a flattened product-space law along ``axis``."""
    if int(np.prod(shape)) != joint.n:
        raise SizeMismatchError("Shape does not factor the joint alphabet.")
    tensor = joint.probs.reshape(shape)
    other = tuple(i for i in range(len(shape)) if i != axis)
    return Dist(tensor.sum(axis=other))


def permute(d: Dist, perm: Sequence[int]) -> Dist:
    if sorted(perm) != list(range(d.n)):
        raise SizeMismatchError("Permutation does not match the alphabet.")
    return Dist(d.probs[list(perm)])


def tv_distance(a: Dist, b: Dist) -> float:
    _require_same_size(a, b)
    return 0.5 * float(np.sum(np.abs(a.probs - b.probs)))
