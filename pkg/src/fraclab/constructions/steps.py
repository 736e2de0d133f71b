"""Two-level piecewise-constant model fields and the prescribing function of the last one."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..quadrature.fields import ScalarField, SmoothWindow, TailDescriptor
from ..quadrature.kernel import tail_integral
from ..quadrature.rules import DEFAULT_CONFIG, QuadConfig
from ..specfun import FracParams

__all__ = ["StepFamily", "make_step_family", "step_field", "exterior_kernel_mass"]


def step_field(n: int, inner: float, outer: float, radius: float, name: str) -> ScalarField:
    """Field equal to ``inner`` for ``|x| <= radius`` and ``outer`` beyond.

    The evaluation window is the open ball of that radius: the jump makes
    the operator undefined on the sphere and the window keeps quadrature
    away from it.
    """
    inner, outer, radius = float(inner), float(outer), float(radius)

    def prof(rho, _a=inner, _b=outer, _r=radius):
        rho = np.asarray(rho, dtype=float)
        return np.where(rho <= _r, _a, _b)

    return ScalarField.from_profile(
        n, prof, TailDescriptor.power_law(outer, 0.0, radius), breakpoints=(radius,),
        window=SmoothWindow(radius), nonneg=min(inner, outer) >= 0.0, name=name,
    )


@dataclass(frozen=True)
class StepFamily:
    """One member of a step family.

    ``kind`` is ``"W"`` (levels ``lam``, ``lam + lam^2`` across ``|x| = 3``),
    ``"V"`` (the rescaling ``j^{-1} W_j(j^{-1/(2s)} x)``, levels 1 and
    ``1 + j`` across ``|x| = 3 R_j``, ``R_j = j^{1/(2s)}``) or ``"U"``
    (levels ``lam``, ``lam + lam^p`` across ``|x| = 3``).
    """

    kind: str
    index: float
    params: FracParams
    field: ScalarField
    jump_radius: float
    p: float | None = None

    @property
    def scale_radius(self) -> float:
        """``R_j`` for the V family (1 otherwise)."""
        return self.jump_radius / 3.0

    def prescribed(self, x, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        """``K(x) = -c int_{|y| > 3} |x - y|^{-n-2s} dy`` (U family only, ``|x| < 3``)."""
        if self.kind != "U":
            raise ValueError("the prescribing function belongs to the U family")
        return -exterior_kernel_mass(self.params, x, 3.0, cfg)


def exterior_kernel_mass(params: FracParams, x, radius: float, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``c int_{|y| > radius} |x - y|^{-n-2s} dy``."""
    one = ScalarField.constant(params.n, 1.0)
    return tail_integral(one, x, radius, params, cfg)[0]


def make_step_family(kind: str, index: float, params: FracParams, p: float | None = None) -> StepFamily:
    """Build ``W_lam``, ``V_j`` or ``U_lam`` (the latter needs the exponent ``p``)."""
    n, s = params.n, params.sigma
    if kind == "W":
        lam = float(index)
        if not lam > 0.0:
            raise ValueError("lambda must be positive")
        f = step_field(n, lam, lam + lam * lam, 3.0, f"W_{lam:g}")
        return StepFamily("W", lam, params, f, 3.0)
    if kind == "V":
        j = float(index)
        if not j >= 1.0:
            raise ValueError("j must be at least 1")
        Rj = j ** (1.0 / (2.0 * s))
        f = step_field(n, 1.0, 1.0 + j, 3.0 * Rj, f"V_{j:g}")
        return StepFamily("V", j, params, f, 3.0 * Rj)
    if kind == "U":
        if p is None:
            raise ValueError("the U family needs the exponent p")
        lam = float(index)
        if not lam > 0.0:
            raise ValueError("lambda must be positive")
        f = step_field(n, lam, lam + lam ** p, 3.0, f"U_{lam:g}")
        return StepFamily("U", lam, params, f, 3.0, p=float(p))
    raise ValueError(f"unknown step family {kind!r}")
