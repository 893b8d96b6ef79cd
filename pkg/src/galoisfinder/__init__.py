"""Exact-arithmetic search for Galois representations attached to Hecke
eigensystems in the cohomology of congruence subgroups of SL(4,Z)."""

__version__ = "0.1.0"
