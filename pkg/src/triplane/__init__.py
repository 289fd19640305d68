"""Tri-plane diagrams of knotted surfaces: words, moves, invariants and search."""

__version__ = "0.1.0"
