"""Closed-form constants: sphere measures, the operator normalization and tail integrals.

All values are plain double precision. The gamma function is taken from
:func:`math.gamma`, which is accurate to a few ulp on the positive axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FracParams",
    "sphere_measures",
    "normalization_constant",
    "tail_constant",
    "weighted_tail_constant",
    "ball_complement_integral",
]


def _check_dimension(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma!r}")
    return sigma


def sphere_measures(n: int) -> tuple[float, float]:
    """Return ``(|S^{n-1}|, |B_1|)`` for the unit sphere and ball in R^n.

    >>> sphere_measures(1)
    (2.0, 2.0)
    """
    n = _check_dimension(n)
    if n == 1:
        # 2 pi^{1/2} / Gamma(1/2) = 2, avoid the rounding in the quotient
        return 2.0, 2.0
    area = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    return area, area / n


def normalization_constant(n: int, sigma: float) -> float:
    """Normalization of the singular-integral form of the fractional Laplacian.

    ``2^{2 sigma} sigma Gamma((n + 2 sigma)/2) / (pi^{n/2} Gamma(1 - sigma))``
    """
    n = _check_dimension(n)
    sigma = _check_sigma(sigma)
    num = 2.0 ** (2.0 * sigma) * sigma * math.gamma((n + 2.0 * sigma) / 2.0)
    return num / (math.pi ** (n / 2.0) * math.gamma(1.0 - sigma))


def tail_constant(n: int, sigma: float) -> float:
    """Integral of ``|y|^{-n-2 sigma}`` over the complement of the unit ball."""
    sigma = _check_sigma(sigma)
    return sphere_measures(n)[0] / (2.0 * sigma)


def weighted_tail_constant(n: int, sigma: float, q: float) -> float:
    """Integral of ``|y|^{-n-2 sigma-q}`` over the complement of the unit ball.

    Finite only for ``q > -2 sigma``.
    """
    sigma = _check_sigma(sigma)
    q = float(q)
    if not q > -2.0 * sigma:
        raise ValueError(f"need q > -2*sigma for a finite tail, got q={q!r}, sigma={sigma!r}")
    return sphere_measures(n)[0] / (2.0 * sigma + q)


def ball_complement_integral(n: int, sigma: float, r: float, q: float = 0.0) -> float:
    """``int_{|y| > r} |y|^{-n-2 sigma-q} dy = |S^{n-1}| r^{-2 sigma-q} / (2 sigma + q)``."""
    r = float(r)
    if not r > 0.0:
        raise ValueError(f"radius must be positive, got {r!r}")
    return weighted_tail_constant(n, sigma, q) * r ** (-2.0 * float(sigma) - float(q))


@dataclass(frozen=True)
class FracParams:
    """Dimension, order and the derived constants every evaluator needs.

    Build with :meth:`FracParams.make`; the derived fields are filled in
    from ``n`` and ``sigma``.
    """

    n: int
    sigma: float
    c: float
    gamma_tail: float
    sphere_area: float
    ball_volume: float

    @classmethod
    def make(cls, n: int, sigma: float) -> "FracParams":
        n = _check_dimension(n)
        sigma = _check_sigma(sigma)
        area, vol = sphere_measures(n)
        return cls(
            n=n,
            sigma=sigma,
            c=normalization_constant(n, sigma),
            gamma_tail=area / (2.0 * sigma),
            sphere_area=area,
            ball_volume=vol,
        )

    @property
    def kernel_power(self) -> float:
        """Exponent ``n + 2 sigma`` of the singular kernel."""
        return self.n + 2.0 * self.sigma

    def weighted_tail(self, q: float) -> float:
        return weighted_tail_constant(self.n, self.sigma, q)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": self.sigma,
            "c": self.c,
            "gamma_tail": self.gamma_tail,
            "sphere_area": self.sphere_area,
            "ball_volume": self.ball_volume,
        }
