"""Exact-arithmetic toolkit for quiver representations and their semi-invariant rings."""

__version__ = "0.1.0"
