"""Parsing of command-line specs and the validated run configuration."""

from __future__ import annotations

import json
import logging
from argparse import Namespace
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from gfdiv.config import DEFAULT_SEED
from gfdiv.core.models import SolverOpts
from gfdiv.core.probcore import Channel, Dist
from gfdiv.exceptions import ConfigurationError, SpecParseError
from gfdiv.generators.descriptors import (
    AdmissiblePair,
    FGenerator,
    GTransform,
    ShapeFunction,
    make_pair,
)
from gfdiv.generators.registry import lookup_shape, lookup_transform
from gfdiv.generators.tabulated import generator_from_spec

logger = logging.getLogger(__name__)

Command = Literal["div", "info", "subadd", "check", "bounds", "exponent", "tables"]


class RunConfig(BaseModel):
    """Merged ``--config`` file and explicit flags; flags win."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    g: str = "x"
    f: str = "kl"
    p: str | None = None
    q: str | None = None
    channel: str | None = None
    input: str | None = None
    maximize: bool = False

    grid_res: int = Field(default=25, ge=2)
    random_samples: int = Field(default=100_000, ge=0)
    eps_grid: str | None = None
    qy: str | None = None
    ry: str | None = None
    qz: str | None = None
    rz: str | None = None

    target: Literal["T", "Tplus", "Tminus", "inv_gprime", "roots"] = "T"
    shape: str | None = None
    lam: float = 1.0
    a: float = 0.0
    b: float = 0.0

    kind: Literal["fano", "blocklength", "ht", "klcmp"] = "fano"
    ms: str = "2"
    eps: str = "0.1"
    n: int = Field(default=1, ge=1)
    alpha: float | None = None
    beta: float | None = None
    threshold: float = 0.0
    trials: int = Field(default=100_000, ge=1)
    s: float = 2.0
    c: float = 1.0
    direction: Literal["PLUS", "MINUS"] = "PLUS"

    rates: str | None = None
    family: Literal["power"] = "power"
    bits: bool = False
    oracle: bool = False

    which: Literal["1", "2", "all"] = "all"

    restarts: int = Field(default=20, ge=0)
    max_iters: int = Field(default=10_000, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    threads: int | None = Field(default=None, ge=1)
    strict: bool = False
    format: Literal["json", "csv", "pretty"] = "json"
    output: str | None = None

    def solver_opts(self) -> SolverOpts:
        return SolverOpts(
            restarts=self.restarts, max_iters=self.max_iters, seed=self.seed, threads=self.threads
        )


def load_run_config(args: Namespace) -> RunConfig:
    """Validate ``--config`` contents overlaid by flags that were actually given."""
    merged: dict[str, Any] = {}
    path = getattr(args, "config", None)
    if path:
        try:
            merged.update(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecParseError(f"Cannot read config file {path!r}.", details=str(exc)) from exc
    for key, value in vars(args).items():
        if key in RunConfig.model_fields and value is not None:
            merged[key] = value
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as exc:
        raise ConfigurationError("Invalid run configuration.", details=str(exc)) from exc


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError("Malformed JSON spec.", details=str(exc)) from exc


def parse_floats(text: str) -> list[float]:
    stripped = text.strip()
    if stripped.startswith("["):
        return [float(v) for v in _loads(stripped)]
    try:
        return [float(item) for item in stripped.split(",") if item.strip()]
    except ValueError as exc:
        raise SpecParseError(f"Expected comma-separated numbers, got {text!r}.") from exc


def parse_ints(text: str) -> list[int]:
    values = parse_floats(text)
    if any(v != int(v) for v in values):
        raise SpecParseError(f"Expected integers, got {text!r}.")
    return [int(v) for v in values]


def parse_dist(text: str) -> Dist:
    return Dist(parse_floats(text))


def parse_channel(text: str) -> Channel:
    """``bsc:δ``, ``bec:e``, ``identity:n``, a JSON matrix, or a path to one."""
    stripped = text.strip()
    if stripped.startswith("["):
        return Channel.from_json(stripped)
    preset, sep, argument = stripped.partition(":")
    if sep:
        try:
            if preset == "bsc":
                return Channel.bsc(float(argument))
            if preset == "bec":
                return Channel.bec(float(argument))
            if preset == "identity":
                return Channel.identity(int(argument))
        except ValueError as exc:
            raise SpecParseError(f"Bad channel preset argument in {text!r}.") from exc
        raise SpecParseError(f"Unknown channel preset {preset!r}.", details="bsc, bec, identity")
    path = Path(stripped)
    if path.is_file():
        return Channel.from_json(path.read_text(encoding="utf-8"))
    raise SpecParseError(f"Cannot interpret channel spec {text!r}.")


def _split_named(text: str) -> tuple[str, dict[str, float]]:
    """``name`` or ``name:key=value,key=value``."""
    name, _, rest = text.strip().partition(":")
    params: dict[str, float] = {}
    for item in filter(None, (chunk.strip() for chunk in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise SpecParseError(f"Expected key=value in {text!r}.")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise SpecParseError(f"Parameter {key!r} is not a number.") from exc
    return name, params


def parse_generator(text: str) -> FGenerator:
    stripped = text.strip()
    if stripped.startswith("{"):
        return generator_from_spec(stripped)
    name, params = _split_named(stripped)
    return generator_from_spec({"name": name, "params": params, "kind": "f"})


def parse_transform(text: str) -> GTransform:
    name, params = _split_named(text)
    return lookup_transform(name, **params)


def parse_shape(text: str) -> ShapeFunction:
    name, params = _split_named(text)
    return lookup_shape(name, **params)


def parse_pair(g_text: str, f_text: str) -> AdmissiblePair:
    return make_pair(parse_transform(g_text), parse_generator(f_text))


def require(value: str | None, flag: str) -> str:
    if value is None:
        raise SpecParseError(f"Missing required option {flag}.")
    return value
