"""Pydantic records shared by services and the CLI.

Reports are plain data: they serialize through ``model_dump`` and rebuild with
``model_validate``. Extended reals travel as ``float('inf')``.
"""

from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from gfdiv.config import DEFAULT_SEED
from gfdiv.core.probcore import Dist


class Verdict(StrEnum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", ser_json_inf_nan="constants")


class SolverOpts(_Record):
    """Knobs of the simplex solvers; defaults follow the documented protocol."""

    restarts: int = Field(default=20, ge=0)
    max_iters: int = Field(default=10_000, ge=1)
    tol: float = Field(default=1e-12, gt=0.0)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    assume_permutation_invariant: bool = False
    stall_window: int = Field(default=50, ge=1)
    outer_max_iters: int = Field(default=300, ge=1)
    threads: int | None = Field(default=None, ge=1)


class InfoResult(_Record):
    value: float
    argmin_q: tuple[float, ...]
    solver_iters: int
    restarts_used: int
    certified_gap: float
    kkt_residual: float = 0.0
    certified: bool = False

    @property
    def argmin(self) -> Dist:
        return Dist(self.argmin_q)


class ScanReport(_Record):
    target: str
    min_gap: float
    witness: tuple[float, ...] | None = None
    samples: int
    grid_res: int
    tol: float
    verdict: Verdict
    notes: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


class BoundResult(_Record):
    value: float
    inputs_echo: dict[str, Any] = Field(default_factory=dict)
    side_conditions: dict[str, bool] = Field(default_factory=dict)


class ExponentPoint(_Record):
    rate: float
    value: float
    s: float | None = None
    input_dist: tuple[float, ...] | None = None
    output_dist: tuple[float, ...] | None = None
    lower: float
    upper: float
    converged: bool = True


class ExponentCurve(_Record):
    family: str
    rate_grid: tuple[float, ...]
    values: tuple[float, ...]
    per_point: tuple[ExponentPoint, ...]
    psi_bounds: tuple[float, float] = (1.0, 1.0)
