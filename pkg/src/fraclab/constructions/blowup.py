"""Positive family ``u_lam`` with bounded negative ``K_lam = (-Delta)^s u_lam / u_lam^p``.

``u_lam`` equals ``lam`` on ``B_3``, rises smoothly to ``lam + lam^p`` on
``4 <= |x| <= R`` and then blends into ``|x|^{-q}`` on ``R <= |x| <= R + 1``.
On ``B_2`` the prescribing function has the cancellation-free form

    K_lam(x) = c int g(y) |x - y|^{-n-2s} dy,
    g = -psi on (3, 4],  -1 on (4, R],
        lam^{1-p} phi + phi - 1 - lam^{-p} phi |y|^{-q} beyond R,

with ``psi = eta(|y| - 3)`` and ``phi = eta(|y| - R)``. ``R`` is the least
radius for which the explicit bounds keep ``K_lam`` inside a fixed negative
window and its Hessian at the origin uniformly negative definite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from ..errors import DeltaSearchFailed
from ..quadrature.fields import ScalarField, TailDescriptor
from ..quadrature.kernel import kernel_derivative_integral, kernel_integral
from ..quadrature.pv import fraclap_pv
from ..quadrature.richardson import richardson_gradient
from ..quadrature.rules import DEFAULT_CONFIG, QuadConfig
from ..specfun import FracParams
from .cutoff import shell_cutoff

__all__ = [
    "radius_conditions",
    "choose_R",
    "BlowupFamily",
    "KDerivatives",
    "make_u_lambda",
    "K_lambda_eval",
    "K_lambda_B2",
    "K_derivatives",
    "hessian_terms_at_origin",
    "estimate_c3",
    "estimate_c4",
    "delta0_and_rescale",
    "shifted_ball_grid",
]

_psi = shell_cutoff(3.0)


# --------------------------------------------------------------------------
# radius selection
# --------------------------------------------------------------------------
def radius_conditions(n: int, sigma: float, p: float, q: float, lam: float, R: float) -> dict:
    """Margins of the two radius conditions (both hold iff both margins are >= 0).

    ``a``: ``gamma (R-2)^{-2s} + 2^{n+2s} gamma (lam^{1-p} + 1) R^{-2s}
    + 2^{n+2s} gamma_q lam^{-p} R^{-2s-q} <= gamma 6^{-2s} / 2``;
    ``b``: ``4^{-2s-2} - (1 + lam^{1-p}) R^{-2s-2} >= 4^{-2s-3}``.
    """
    P = FracParams.make(n, sigma)
    s2 = 2.0 * P.sigma
    g, gq = P.gamma_tail, P.weighted_tail(q)
    k = 2.0 ** (n + s2)
    lhs_a = g * (R - 2.0) ** (-s2) + k * g * (lam ** (1.0 - p) + 1.0) * R ** (-s2) \
        + k * gq * lam ** (-p) * R ** (-s2 - q)
    rhs_a = 0.5 * g * 6.0 ** (-s2)
    lhs_b = 4.0 ** (-s2 - 2.0) - (1.0 + lam ** (1.0 - p)) * R ** (-s2 - 2.0)
    rhs_b = 4.0 ** (-s2 - 3.0)
    return {
        "a_lhs": lhs_a, "a_rhs": rhs_a, "a_margin": rhs_a - lhs_a,
        "b_lhs": lhs_b, "b_rhs": rhs_b, "b_margin": lhs_b - rhs_b,
    }


def _admissible(n, sigma, p, q, lam, R) -> bool:
    c = radius_conditions(n, sigma, p, q, lam, R)
    return c["a_margin"] >= 0.0 and c["b_margin"] >= 0.0


def choose_R(n: int, sigma: float, p: float, q: float, lam: float, tol: float = 1e-9) -> float:
    """Least ``R > 9`` satisfying both radius conditions, to absolute accuracy ``tol``.

    The left side of ``a`` decreases and that of ``b`` increases with
    ``R``, so the admissible set is a half line; it is bracketed by
    doubling from 18 and then bisected. Condition ``a`` always fails at
    ``R = 9`` (``(6/7)^{2s} > 1/2``), so the returned value exceeds 9.
    """
    if not q > -2.0 * sigma:
        raise ValueError(f"need q > -2 sigma, got q={q}")
    if not lam >= 1.0:
        raise ValueError("lambda must be at least 1")
    lo, hi = 9.0, 18.0
    while not _admissible(n, sigma, p, q, lam, hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _admissible(n, sigma, p, q, lam, mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# the family
# --------------------------------------------------------------------------
def _u_profile(lam, p, q, R):
    top = lam + lam ** p
    phi = shell_cutoff(R)

    def prof(rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            far = rho ** (-q)
        f = phi(rho)
        return np.select(
            [rho <= 3.0, rho <= 4.0, rho <= R],
            [np.full_like(rho, lam), lam + lam ** p * _psi(rho), np.full_like(rho, top)],
            (1.0 - f) * top + f * np.where(rho > R, far, 0.0),
        )

    return prof


def _integrand_profile(lam, p, q, R):
    phi = shell_cutoff(R)
    a, b = lam ** (1.0 - p), lam ** (-p)

    def prof(rho):
        rho = np.asarray(rho, dtype=float)
        f = phi(rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            far = a * f + f - 1.0 - b * f * rho ** (-q)
        return np.select([rho <= 3.0, rho <= 4.0, rho <= R],
                         [0.0 * rho, -_psi(rho), -1.0 + 0.0 * rho], far)

    return prof


@dataclass(frozen=True)
class KDerivatives:
    gradient: np.ndarray
    hessian: np.ndarray
    error: float
    terms: list | None = None  # E_1..E_4 at the origin when requested


@dataclass(frozen=True)
class BlowupFamily:
    """One member ``lam`` of the family with its fields and realized constants.

    ``c3``, ``c4``, ``c5``, ``delta0`` and ``u_tilde`` are ``None`` until
    :func:`delta0_and_rescale` completes the family.
    """

    params: FracParams
    p: float
    q: float
    lam: float
    R: float
    u: ScalarField
    integrand: ScalarField
    cfg: QuadConfig = DEFAULT_CONFIG
    c3: float | None = None
    c4: float | None = None
    c5: float | None = None
    delta0: float | None = None
    u_tilde: ScalarField | None = None
    gradient_min: float | None = None
    extra: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def sigma(self) -> float:
        return self.params.sigma

    @property
    def c1(self) -> float:
        """Lower window constant ``3 c gamma``."""
        return 3.0 * self.params.c * self.params.gamma_tail

    @property
    def c2(self) -> float:
        """Upper window constant ``c gamma 6^{-2s} / 2``."""
        return 0.5 * self.params.c * self.params.gamma_tail * 6.0 ** (-2.0 * self.sigma)

    @property
    def hessian_bound(self) -> float:
        """``(n + 2s) c |B_1| 4^{-2s-3}``."""
        P = self.params
        return P.kernel_power * P.c * P.ball_volume * 4.0 ** (-2.0 * P.sigma - 3.0)

    def K(self, x, cfg: QuadConfig | None = None) -> float:
        return K_lambda_eval(self, x, cfg)

    def K_tilde(self, x, cfg: QuadConfig | None = None) -> float:
        """``delta0^{q + 2s - pq} K(delta0 (x + 4 e_1))``."""
        if self.delta0 is None:
            raise ValueError("family is not rescaled yet")
        d = self.delta0
        y = d * (np.atleast_1d(np.asarray(x, dtype=float)) + 4.0 * np.eye(self.n)[0])
        return d ** (self.q + 2.0 * self.sigma - self.p * self.q) * K_lambda_eval(self, y, cfg)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "sigma": self.sigma, "p": self.p, "q": self.q, "lambda": self.lam,
            "R": self.R, "c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4,
            "c5": self.c5, "delta0": self.delta0, "gradient_min": self.gradient_min,
        }


def make_u_lambda(n: int, sigma: float, p: float, q: float, lam: float,
                  cfg: QuadConfig = DEFAULT_CONFIG, R: float | None = None) -> BlowupFamily:
    """Build ``u_lam`` and the ``B_2`` integrand of ``K_lam``; ``R`` defaults to :func:`choose_R`.

    Raises ``ValueError`` for ``q <= -2 sigma`` or ``lam < 1``.
    """
    params = FracParams.make(n, sigma)
    p, q, lam = float(p), float(q), float(lam)
    if not q > -2.0 * params.sigma:
        raise ValueError(f"need q > -2 sigma for the weighted class, got q={q}")
    if not lam >= 1.0:
        raise ValueError("lambda must be at least 1")
    if R is None:
        R = choose_R(n, sigma, p, q, lam)
    R = float(R)
    if not R > 9.0:
        raise ValueError("R must exceed 9")
    u = ScalarField.from_profile(
        n, _u_profile(lam, p, q, R), TailDescriptor.power_law(1.0, q, R + 1.0),
        breakpoints=(3.0, 4.0, R, R + 1.0), nonneg=True, name=f"u_{lam:g}",
    )
    tail = TailDescriptor.power_sum([(lam ** (1.0 - p), 0.0), (-lam ** (-p), q)], R + 1.0)
    g = ScalarField.from_profile(
        n, _integrand_profile(lam, p, q, R), tail, breakpoints=(3.0, 4.0, R, R + 1.0),
        support_inner=3.0, name=f"K integrand {lam:g}",
    )
    return BlowupFamily(params, p, q, lam, R, u, g, cfg)


def K_lambda_B2(family: BlowupFamily, x, cfg: QuadConfig | None = None) -> float:
    """``K_lam(x)`` for ``|x| < 2`` from the cancellation-free integral."""
    cfg = family.cfg if cfg is None else cfg
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(family.n)
    if not np.linalg.norm(x) < 2.0:
        raise ValueError("the fast path needs |x| < 2")
    v, _ = kernel_integral(family.integrand, x, family.params, cfg)
    return family.params.c * v


def K_lambda_eval(family: BlowupFamily, x, cfg: QuadConfig | None = None, path: str = "auto") -> float:
    """``(-Delta)^s u_lam (x) / u_lam(x)^p``.

    ``path="auto"`` uses the fast integral on ``B_2`` and the principal
    value integral elsewhere; ``"general"`` or ``"fast"`` force one path.
    """
    cfg = family.cfg if cfg is None else cfg
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(family.n)
    if path == "fast" or (path == "auto" and np.linalg.norm(x) < 2.0):
        return K_lambda_B2(family, x, cfg)
    if path not in ("auto", "general"):
        raise ValueError(f"unknown path {path!r}")
    v, _ = fraclap_pv(family.u, x, family.params, cfg)
    return v / float(family.u(x)) ** family.p


def _term_fields(family: BlowupFamily) -> list[ScalarField]:
    n, lam, p, q, R = family.n, family.lam, family.p, family.q, family.R
    phi = shell_cutoff(R)
    a, b = lam ** (1.0 - p), lam ** (-p)

    def g1(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where((rho > 3.0) & (rho <= 4.0), -_psi(rho), 0.0)

    def g2(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where((rho > 4.0) & (rho <= R), -1.0, 0.0)

    def g3(rho):
        rho = np.asarray(rho, dtype=float)
        return np.where(rho > R, a * phi(rho), 0.0)

    def g4(rho):
        rho = np.asarray(rho, dtype=float)
        f = phi(rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -(1.0 - f + b * f * rho ** (-q))
        return np.where(rho > R, v, 0.0)

    mk = ScalarField.from_profile
    return [
        mk(n, g1, TailDescriptor.compact(4.0), (3.0, 4.0), support_inner=3.0, name="E1"),
        mk(n, g2, TailDescriptor.compact(R), (4.0, R), support_inner=4.0, name="E2"),
        mk(n, g3, TailDescriptor.power_law(a, 0.0, R + 1.0), (R, R + 1.0), support_inner=R, name="E3"),
        mk(n, g4, TailDescriptor.power_law(-b, q, R + 1.0), (R, R + 1.0), support_inner=R, name="E4"),
    ]


def hessian_terms_at_origin(family: BlowupFamily, cfg: QuadConfig | None = None,
                            method: str = "auto") -> list[np.ndarray]:
    """The four matrices ``E_l = int g_l(y) |y|^{-m-4} ((m+2) y y^T - |y|^2 I) dy``.

    Their sum times ``m c`` (``m = n + 2s``) is the Hessian of ``K_lam`` at 0.
    """
    cfg = family.cfg if cfg is None else cfg
    m = family.params.kernel_power
    out = []
    for f in _term_fields(family):
        H, _ = kernel_derivative_integral(f, np.zeros(family.n), 2, family.params, cfg, method=method)
        out.append(H / m)
    return out


def K_derivatives(family: BlowupFamily, x, cfg: QuadConfig | None = None, *,
                  method: str = "auto", with_terms: bool = False) -> KDerivatives:
    """Gradient and Hessian of ``K_lam`` at ``x in B_3`` (where ``u_lam`` is constant).

    ``with_terms=True`` (only at ``x = 0``) also returns the four Hessian
    terms ``E_1..E_4``.
    """
    cfg = family.cfg if cfg is None else cfg
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(family.n)
    if not np.linalg.norm(x) < 3.0:
        raise ValueError("derivative formulas need |x| < 3")
    c = family.params.c
    G, eg = kernel_derivative_integral(family.integrand, x, 1, family.params, cfg, method=method)
    H, eh = kernel_derivative_integral(family.integrand, x, 2, family.params, cfg, method=method)
    terms = None
    if with_terms:
        if np.any(x):
            raise ValueError("the Hessian terms are defined at the origin")
        terms = hessian_terms_at_origin(family, cfg, method=method)
    return KDerivatives(c * np.asarray(G), c * np.asarray(H), c * (eg + eh), terms)


# --------------------------------------------------------------------------
# constants and the shifted rescaling
# --------------------------------------------------------------------------
def estimate_c3(families, radii=None, cfg: QuadConfig | None = None,
                h0: float = 0.1, steps: int = 3) -> float:
    """``max |grad K| + |Hess K| + |D^3 K|`` (Frobenius norms) over sample points of ``B_2``.

    ``K`` is radial, so the norms only depend on ``|x|`` and the sample
    points lie on the ray through ``e_1``. ``D^3 K`` is the Richardson
    derivative of the kernel-integral Hessian.
    """
    if radii is None:
        radii = np.linspace(0.0, 1.9, 9)
    best = 0.0
    for fam in families:
        c = fam.cfg if cfg is None else cfg
        e1 = np.eye(fam.n)[0]

        def hess(z, _f=fam, _c=c):
            return K_derivatives(_f, z, _c).hessian

        for r in radii:
            x = float(r) * e1
            d = K_derivatives(fam, x, c)
            third = richardson_gradient(hess, x, h0, steps)
            total = np.linalg.norm(d.gradient) + np.linalg.norm(d.hessian) + np.linalg.norm(third)
            best = max(best, float(total))
    return best


def estimate_c4(families, cfg: QuadConfig | None = None) -> float:
    """Smallest eigenvalue of ``-Hess K_lam(0)`` over the given family members."""
    out = math.inf
    for fam in families:
        c = fam.cfg if cfg is None else cfg
        H = K_derivatives(fam, np.zeros(fam.n), c).hessian
        out = min(out, float(np.min(np.linalg.eigvalsh(-H))))
    return out


def shifted_ball_grid(n: int, delta0: float, k: int = 9) -> np.ndarray:
    """Sample points of the open ball of radius ``2 delta0`` about ``4 delta0 e_1``."""
    centre = 4.0 * delta0 * np.eye(n)[0]
    rad = 2.0 * delta0 * (1.0 - 1e-9)
    if n == 1:
        return (centre + rad * np.linspace(-1.0, 1.0, k))[:, None]
    pts = [centre]
    for s in (0.5, 1.0):
        for th in np.linspace(0.0, 2.0 * math.pi, 2 * k, endpoint=False):
            d = np.zeros(n)
            d[0], d[1] = math.cos(th), math.sin(th)
            pts.append(centre + s * rad * d)
    return np.array(pts)


def delta0_and_rescale(family: BlowupFamily, cfg: QuadConfig | None = None, *,
                       c3: float | None = None, c4: float | None = None) -> BlowupFamily:
    """Complete the family with ``delta0``, ``c5`` and the shifted, rescaled ``u_tilde``.

    ``delta0 = min(1/8, c4 / (6 c3))`` and ``c5 = c4 delta0``; on
    ``|x| <= 6 delta0`` the Taylor bound ``|grad K(x)| >= c4 |x| - c3 |x|^2 / 2``
    then gives at least ``(5/3) c4 delta0`` on the shifted ball, which is
    confirmed on a sample grid.

    Raises
    ------
    DeltaSearchFailed
        some grid point has ``|grad K| < c5``.
    """
    cfg = family.cfg if cfg is None else cfg
    if c3 is None:
        c3 = estimate_c3([family], cfg=cfg)
    if c4 is None:
        c4 = estimate_c4([family], cfg=cfg)
    if not (c3 > 0.0 and c4 > 0.0):
        raise DeltaSearchFailed(f"derivative constants must be positive (c3={c3}, c4={c4})")
    d0 = min(0.125, c4 / (6.0 * c3))
    c5 = c4 * d0
    gmin = math.inf
    for x in shifted_ball_grid(family.n, d0):
        g = K_derivatives(family, x, cfg).gradient
        gmin = min(gmin, float(np.linalg.norm(g)))
    if gmin < c5:
        raise DeltaSearchFailed(
            f"|grad K| = {gmin:.6g} < c5 = {c5:.6g} on the shifted ball; tighten c3/c4 estimates"
        )
    shift = -4.0 * np.eye(family.n)[0]
    ut = family.u.transformed(amplitude=d0 ** family.q, scale=d0, shift=shift, name=f"u~_{family.lam:g}")
    return replace(family, c3=float(c3), c4=float(c4), c5=float(c5), delta0=float(d0),
                   u_tilde=ut, gradient_min=gmin)
