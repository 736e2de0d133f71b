"""Smooth compactly supported family whose fractional Laplacians converge to -1.

``w_lam`` is a smoothed two-level step (``lam`` inside ``B_3``, ``lam + lam^2``
on ``4 <= |x| <= 6``) cut off to zero beyond ``|x| = 7``. Its normalized
operator ``f_lam = lam^{-2} (-Delta)^s w_lam`` converges on ``B_2`` to a
negative function ``f_lim``; ``beta = (-f_lim(0))^{-1/(2s)}`` fixes the
rescaling ``v_j(x) = j^{-1} w_j(beta j^{-1/(2s)} x)``, which equals 1 on
``B_{3 R_j}`` with ``R_j = beta^{-1} j^{1/(2s)}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..quadrature.fields import ScalarField, TailDescriptor
from ..quadrature.kernel import kernel_integral
from ..quadrature.pv import fraclap_pv
from ..quadrature.rules import DEFAULT_CONFIG, QuadConfig
from ..specfun import FracParams
from .cutoff import shell_cutoff

__all__ = [
    "MollifiedFamily",
    "make_w_lambda",
    "f_lambda",
    "f_limit",
    "beta",
    "make_v_j",
    "limit_integrand",
    "outer_cutoff_field",
]

_psi = shell_cutoff(3.0)
_phi = shell_cutoff(6.0)


def make_w_lambda(lam: float, params: FracParams) -> ScalarField:
    """The four-branch field ``w_lam``; raises ``ValueError`` for ``lam < 1``."""
    lam = float(lam)
    if not lam >= 1.0:
        raise ValueError(f"lambda must be at least 1, got {lam}")
    top = lam + lam * lam

    def prof(rho, _l=lam, _t=top):
        rho = np.asarray(rho, dtype=float)
        return np.select(
            [rho <= 3.0, rho <= 4.0, rho <= 6.0],
            [np.full_like(rho, _l), _l + _l * _l * _psi(rho), np.full_like(rho, _t)],
            (1.0 - _phi(rho)) * _t,
        )

    return ScalarField.from_profile(
        params.n, prof, TailDescriptor.compact(7.0), breakpoints=(3.0, 4.0, 6.0, 7.0),
        nonneg=True, name=f"w_{lam:g}",
    )


def limit_integrand(params: FracParams) -> ScalarField:
    """``psi`` on ``(3, 4]``, 1 on ``(4, 6]``, ``1 - phi`` on ``(6, 7]``, zero elsewhere."""

    def prof(rho):
        rho = np.asarray(rho, dtype=float)
        return np.select([rho <= 3.0, rho <= 4.0, rho <= 6.0], [0.0 * rho, _psi(rho), 1.0 + 0.0 * rho],
                         1.0 - _phi(rho))

    return ScalarField.from_profile(
        params.n, prof, TailDescriptor.compact(7.0), breakpoints=(3.0, 4.0, 6.0, 7.0),
        nonneg=True, support_inner=3.0, name="limit integrand",
    )


def outer_cutoff_field(params: FracParams, radius: float = 6.0) -> ScalarField:
    """``phi(y) = eta(|y| - radius)``, used as an integrand outside ``B_radius``."""
    cut = shell_cutoff(radius)
    return ScalarField.from_profile(
        params.n, cut, TailDescriptor.power_law(1.0, 0.0, radius + 1.0), breakpoints=(radius, radius + 1.0),
        nonneg=True, support_inner=radius, name=f"eta(|y|-{radius:g})",
    )


def _check_b2(x, n):
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(n)
    if not np.linalg.norm(x) < 2.0:
        raise ValueError("the three-term representation holds for |x| < 2")
    return x


def f_limit(x, params: FracParams, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``-c int (psi 1_{3<|y|<4} + 1_{4<|y|<6} + (1 - phi) 1_{|y|>6}) |x - y|^{-n-2s} dy``."""
    x = _check_b2(x, params.n)
    v, _ = kernel_integral(limit_integrand(params), x, params, cfg)
    return -params.c * v


def cutoff_tail(x, params: FracParams, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``c int_{|y| > 6} phi(y) |x - y|^{-n-2s} dy``, the coefficient of ``lam^{-1}`` in ``f_lam``."""
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(params.n)
    v, _ = kernel_integral(outer_cutoff_field(params), x, params, cfg)
    return params.c * v


def f_lambda(lam: float, x, params: FracParams, cfg: QuadConfig = DEFAULT_CONFIG,
             method: str = "direct") -> float:
    """``lam^{-2} (-Delta)^s w_lam (x)``.

    ``method="direct"`` evaluates the principal-value integral of ``w_lam``
    (any ``x``); ``method="decomposed"`` uses ``f_lim(x) + lam^{-1} c int phi k``,
    valid for ``|x| < 2``.
    """
    lam = float(lam)
    if method == "direct":
        v, _ = fraclap_pv(make_w_lambda(lam, params), x, params, cfg)
        return v / (lam * lam)
    if method == "decomposed":
        return f_limit(x, params, cfg) + cutoff_tail(x, params, cfg) / lam
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=64)
def _beta_cached(n: int, sigma: float, cfg: QuadConfig) -> float:
    params = FracParams.make(n, sigma)
    f0 = f_limit(np.zeros(n), params, cfg)
    return (-f0) ** (-1.0 / (2.0 * sigma))


def beta(params: FracParams, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``(-f_lim(0))^{-1/(2 sigma)}``."""
    return _beta_cached(params.n, params.sigma, cfg)


@dataclass(frozen=True)
class MollifiedFamily:
    """Member ``j`` of the rescaled family: ``v_j``, the underlying ``w_j``, ``beta`` and ``R_j``."""

    j: float
    params: FracParams
    beta: float
    R_j: float
    w: ScalarField
    v: ScalarField

    @property
    def scale(self) -> float:
        """The dilation ``beta j^{-1/(2s)}`` with ``v_j(x) = j^{-1} w_j(scale x)``."""
        return self.beta * self.j ** (-1.0 / (2.0 * self.params.sigma))

    def predicted_operator(self, x, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
        """``beta^{2s} f_j(scale x)`` through the three-term representation (``|x| < 2 R_j``)."""
        y = self.scale * np.atleast_1d(np.asarray(x, dtype=float))
        return self.beta ** (2.0 * self.params.sigma) * f_lambda(self.j, y, self.params, cfg, "decomposed")

    def to_dict(self) -> dict:
        return {"j": self.j, "beta": self.beta, "R_j": self.R_j, "n": self.params.n,
                "sigma": self.params.sigma}


def make_v_j(j: float, params: FracParams, cfg: QuadConfig = DEFAULT_CONFIG) -> MollifiedFamily:
    """``v_j(x) = j^{-1} w_j(beta j^{-1/(2s)} x)``; raises ``ValueError`` for ``j < 1``."""
    j = float(j)
    if not j >= 1.0:
        raise ValueError(f"j must be at least 1, got {j}")
    b = beta(params, cfg)
    w = make_w_lambda(j, params)
    scale = b * j ** (-1.0 / (2.0 * params.sigma))
    v = w.transformed(amplitude=1.0 / j, scale=scale, name=f"v_{j:g}")
    return MollifiedFamily(j, params, b, 1.0 / scale, w, v)
