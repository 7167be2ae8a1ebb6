"""Exact marginal polytopes of shift-invariant measures on finite windows."""

__version__ = "0.1.0"
