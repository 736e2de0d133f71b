"""Tail masses, the near/far/tail split and the iterated limit ``b``."""

from .sequence import FunctionSequence
from .decomposition import AEFDecomposition, aef_decompose, truncated_difference
from .tail_mass import (
    BEstimate, ConstantSolutionResult, SandwichResult, constant_solution_check, estimate_b,
    extrapolate, sandwich_check, tail_profile,
)

__all__ = [
    "FunctionSequence", "AEFDecomposition", "aef_decompose", "truncated_difference",
    "BEstimate", "ConstantSolutionResult", "SandwichResult", "constant_solution_check",
    "estimate_b", "extrapolate", "sandwich_check", "tail_profile",
]
