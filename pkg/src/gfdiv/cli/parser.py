from __future__ import annotations

import argparse
import logging
from typing import NoReturn

from gfdiv.cli.handlers import (
    cmd_bounds,
    cmd_check,
    cmd_div,
    cmd_exponent,
    cmd_info,
    cmd_subadd,
    cmd_tables,
)
from gfdiv.exceptions import SpecParseError

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Usage errors become domain errors so they share the one-line error record."""

    def error(self, message: str) -> NoReturn:
        raise SpecParseError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with options; explicit flags win")
    common.add_argument("--seed", type=int, default=None, help="Seed (default 0xC0FFEE)")
    common.add_argument("--threads", type=int, default=None, help="Overrides GFDIV_THREADS")
    common.add_argument(
        "--strict", action="store_true", default=None, help="Exit 2 on a FAIL verdict"
    )
    common.add_argument("--format", choices=["json", "csv", "pretty"], default=None)
    common.add_argument("--output", "-o", default=None, help="Write the report to a file")
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    common.add_argument("--log-level", dest="log_level", default=None)
    return common


def _pair_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--g", default=None, help="Transform, e.g. x, log1p, renyi_G:alpha=2")
    parser.add_argument("--f", default=None, help="Generator name, name:k=v or JSON spec")


def build_parser() -> argparse.ArgumentParser:
    """Configure the command-line application with one handler per subcommand."""

    common = _common_options()
    parser = _Parser(prog="gfdiv", description="(G,f)-divergence toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    div = subparsers.add_parser("div", parents=[common], help="Evaluate G(D_f(p||q))")
    _pair_options(div)
    div.add_argument("--p", default=None)
    div.add_argument("--q", default=None)
    div.set_defaults(handler=cmd_div)

    info = subparsers.add_parser("info", parents=[common], help="(G,f)-information of a channel")
    _pair_options(info)
    info.add_argument("--channel", default=None, help="bsc:d, bec:e, identity:n or JSON")
    info.add_argument("--input", default=None, help="Input law (default uniform)")
    info.add_argument("--maximize", action="store_true", default=None)
    info.set_defaults(handler=cmd_info)

    subadd = subparsers.add_parser("subadd", parents=[common], help="Subadditivity scan")
    _pair_options(subadd)
    subadd.add_argument("--grid-res", dest="grid_res", type=int, default=None)
    subadd.add_argument("--random-samples", dest="random_samples", type=int, default=None)
    subadd.add_argument("--eps-grid", default=None, help="Comma-separated eps grid")
    for flag in ("qy", "ry", "qz", "rz"):
        subadd.add_argument(f"--{flag}", default=None)
    subadd.set_defaults(handler=cmd_subadd)

    check = subparsers.add_parser("check", parents=[common], help="Membership criteria")
    _pair_options(check)
    check.add_argument(
        "--target", choices=["T", "Tplus", "Tminus", "inv_gprime", "roots"], default=None
    )
    check.add_argument("--shape", default=None, help="Shape name for Tplus/Tminus")
    check.add_argument("--qz", default=None)
    check.add_argument("--rz", default=None)
    check.add_argument("--lam", type=float, default=None)
    check.add_argument("--a", type=float, default=None)
    check.add_argument("--b", type=float, default=None)
    check.set_defaults(handler=cmd_check)

    bounds = subparsers.add_parser("bounds", parents=[common], help="Operational bounds")
    _pair_options(bounds)
    bounds.add_argument("--kind", choices=["fano", "blocklength", "ht", "klcmp"], default=None)
    bounds.add_argument("--ms", default=None, help="Comma-separated message set sizes")
    bounds.add_argument("--eps", default=None, help="Comma-separated error probabilities")
    bounds.add_argument("--channel", default=None)
    bounds.add_argument("--p", default=None)
    bounds.add_argument("--q", default=None)
    bounds.add_argument("--n", type=int, default=None)
    bounds.add_argument("--alpha", type=float, default=None)
    bounds.add_argument("--beta", type=float, default=None)
    bounds.add_argument("--threshold", type=float, default=None)
    bounds.add_argument("--trials", type=int, default=None)
    bounds.add_argument("--s", type=float, default=None)
    bounds.add_argument("--c", type=float, default=None)
    bounds.add_argument("--direction", choices=["PLUS", "MINUS"], default=None)
    bounds.set_defaults(handler=cmd_bounds)

    exponent = subparsers.add_parser("exponent", parents=[common], help="Sphere-packing curve")
    exponent.add_argument("--channel", default=None)
    exponent.add_argument("--rates", default=None, help="Comma-separated rates")
    exponent.add_argument("--family", choices=["power"], default=None)
    exponent.add_argument("--bits", action="store_true", default=None)
    exponent.add_argument("--oracle", action="store_true", default=None)
    exponent.set_defaults(handler=cmd_exponent)

    tables = subparsers.add_parser("tables", parents=[common], help="Membership verdict tables")
    tables.add_argument("--which", choices=["1", "2", "all"], default=None)
    tables.set_defaults(handler=cmd_tables)

    return parser
