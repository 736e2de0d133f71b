"""Numerical engine: fields, quadrature rules and the singular-integral evaluators."""

from .fields import ScalarField, SmoothWindow, TailDescriptor
from .rules import DEFAULT_CONFIG, QuadConfig, integrate_pieces, jacobi_integrate
from .pv import fraclap_pv
from .radial import radial_fraclap
from .kernel import PolarKernel, kernel_derivative_integral, kernel_integral, tail_integral
from .richardson import richardson_gradient, richardson_hessian

__all__ = [
    "ScalarField", "SmoothWindow", "TailDescriptor", "DEFAULT_CONFIG", "QuadConfig",
    "integrate_pieces", "jacobi_integrate", "fraclap_pv", "radial_fraclap", "PolarKernel",
    "kernel_integral", "kernel_derivative_integral", "tail_integral",
    "richardson_gradient", "richardson_hessian",
]
