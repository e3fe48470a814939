"""Exact and numerical tools for Weil polynomials, conductor bounds,
trigonometric interval approximants and genus bounds."""

__version__ = "0.1.0"
SCHEMA_VERSION = 1
