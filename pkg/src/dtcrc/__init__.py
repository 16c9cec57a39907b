"""Exact orbifold topological vertex, toric DT series and crepant resolution checks."""

__version__ = "0.1.0"
