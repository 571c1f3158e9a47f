"""Exact Betti numbers of homotopy colimits of toric diagrams over finite posets."""

__version__ = "0.1.0"
