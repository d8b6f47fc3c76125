"""Exact computations with Poisson vertex algebra cohomology complexes."""

__version__ = "0.1.0"
