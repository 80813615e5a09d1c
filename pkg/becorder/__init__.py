"""Exact comparisons of synthetic binary erasure channels"""

__version__ = "1.0.0"
