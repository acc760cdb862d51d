"""Exact p-adic piecewise-scaling dynamics: zeta functions, entropy and realizations."""

__version__ = "0.1.0"
