"""Monic integer polynomials with squarefree discriminant and prescribed signature."""

__version__ = "0.1.0"
