"""Offline acquisition of LMFDB newform records into fixture files."""

__version__ = "0.1.0"
