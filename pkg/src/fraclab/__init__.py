"""Numerical laboratory for the fractional Laplacian and its blow-up limits."""

from .specfun import FracParams

__version__ = "0.1.0"
