"""Exact convex-geometric counts for systems of vector-valued Laurent polynomials."""

__version__ = "0.1.0"
