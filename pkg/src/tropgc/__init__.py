"""Exact homology of Kontsevich's graph complex and of the tropical moduli space of curves."""

__version__ = "0.1.0"
