"""Toolkit for (G,f)-divergences, (G,f)-information and their subadditivity."""

# Re-export main entry point for convenience
from gfdiv.main import main

__all__ = ["main"]
