"""Numerical toolkit for tautness of orbits of compact linear group actions."""

__version__ = "0.1.0"
