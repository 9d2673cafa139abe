"""Exact finite-scale computations for MV-algebras, MV-topologies and their duality."""

__version__ = "0.1.0"
