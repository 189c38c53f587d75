"""Numerics for explicit symmetry breaking kernels between principal series
of GL(n+1, R) and GL(n, R)."""

__version__ = "0.1.0"
