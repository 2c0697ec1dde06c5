"""Command-line plumbing."""

from gfdiv.cli.parser import build_parser

__all__ = ["build_parser"]
