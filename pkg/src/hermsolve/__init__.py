"""Exact rank and inertia analysis of Hermitian solutions of AX = B and AXA* = B."""

__version__ = "0.1.0"
