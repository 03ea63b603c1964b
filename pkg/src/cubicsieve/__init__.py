"""Desk-scale laboratory for prime values of x^3 + 2y^3 with y in a short range."""

__version__ = "0.1.0"
