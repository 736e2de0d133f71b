"""Fractional Laplacian of a radial field by integration over radius about the field centre.

For ``u(y) = U(|y - c|)`` and ``x = c + r e_1``,

    (-Delta)^s u(x) = c_{n,s} P.V. int_0^inf (U(r) - U(rho)) rho^{n-1} H(r, rho) d rho,
    H(r, rho) = int_{S^{n-1}} |r e_1 - rho w|^{-n-2s} dw,

where ``H`` is the polar-angle integral with weight ``sin^{n-2}(theta)``
(two point values for ``n = 1``). Near ``rho = r`` the two sides
``rho = r +- t`` are paired, which removes the principal value; the paired
integrand behaves like ``t^{1-2s}`` and is integrated on dyadically graded
pieces with a Gauss-Jacobi rule on the innermost one.

This path is independent of :func:`fraclap_pv`, which integrates over
spheres about ``x``; the two are used as mutual oracles.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotRadial
from ..specfun import FracParams
from .fields import ScalarField
from .kernel import PolarKernel
from .pv import near_radius_for
from .rules import DEFAULT_CONFIG, QuadConfig, integrate_pieces, jacobi_integrate

__all__ = ["radial_fraclap"]

_GRADING_LEVELS = 2
# the paired integrand cancels to relative size t, so the kernel moments
# must be much more accurate than the outer tolerance
_KERNEL_REL_TOL = 1e-13


def radial_fraclap(
    field: ScalarField,
    r: float,
    params: FracParams,
    cfg: QuadConfig = DEFAULT_CONFIG,
) -> tuple[float, float]:
    """``(-Delta)^sigma u`` at distance ``r`` from the centre of a radial field.

    Returns ``(value, error_estimate)``.

    Raises
    ------
    NotRadial
        the field has no radial profile.
    NonSmoothPoint
        the point is outside the field's smooth window.
    """
    if not field.is_radial:
        raise NotRadial(f"{field.name} has no radial profile")
    n = field.dimension
    if n != params.n:
        raise ValueError(f"field lives in R^{n} but params are for n={params.n}")
    r = float(r)
    if r < 0.0:
        raise ValueError("radius must be nonnegative")
    x = field.center_array + r * np.eye(n)[0]
    delta = near_radius_for(field, x, cfg)
    field.tail.certify(params.sigma)
    if r == 0.0:
        v, e = _at_centre(field, delta, params, cfg)
    else:
        v, e = _off_centre(field, r, delta, params, cfg)
    return params.c * v, params.c * e


def _far_edge(field, lo):
    return max(lo, field.tail.onset)


def _cut(pieces_lo, pieces_hi, breakpoints):
    cuts = {pieces_lo, pieces_hi}
    for b in breakpoints:
        if pieces_lo < b < pieces_hi:
            cuts.add(b)
    e = sorted(cuts)
    return list(zip(e[:-1], e[1:]))


def _at_centre(field, delta, params, cfg):
    # H(0, rho) = |S| rho^{-m}
    sig, area = params.sigma, params.sphere_area
    U = field.profile
    u0 = float(U(np.array([0.0]))[0])
    tol_abs, tol_rel = cfg.abs_tol / (3.0 * params.c), cfg.rel_tol

    def near(t):
        return area * (u0 - U(t)) / (t * t)

    v1, e1 = jacobi_integrate(near, delta, 1.0 - 2.0 * sig, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
    T = _far_edge(field, delta)

    def mid(t):
        return area * (u0 - U(t)) * t ** (-1.0 - 2.0 * sig)

    v2, e2, _ = integrate_pieces(mid, _cut(delta, T, field.breakpoints), cfg, tol_abs=tol_abs, tol_rel=tol_rel)
    tail = field.tail
    v3 = area * u0 * T ** (-2.0 * sig) / (2.0 * sig)
    e3 = 0.0
    if tail.exact and cfg.far_policy == "analytic_tail":
        for coef, q in tail.terms:
            v3 -= coef * area * T ** (-2.0 * sig - q) / (2.0 * sig + q)
    elif tail.kind != "compact":
        def h(s):
            return -area * U(1.0 / s)

        w, e3 = jacobi_integrate(h, 1.0 / T, 2.0 * sig - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
        v3 += w
    return v1 + v2 + v3, e1 + e2 + e3


def _off_centre(field, r, delta, params, cfg):
    n, sig = field.dimension, params.sigma
    m = params.kernel_power
    U = field.profile
    ur = float(U(np.array([r]))[0])
    pk = PolarKernel(n, m, r, cfg, rel_tol=_KERNEL_REL_TOL)
    tol_abs, tol_rel = cfg.abs_tol / (4.0 * params.c), cfg.rel_tol

    def weight(rho):
        return rho ** (n - 1) * pk.moments(rho, 0)[:, 0]

    # paired neighbourhood rho = r +- t, t in [0, w]
    w = min(delta, 0.5 * r)

    def pair(t):
        lo, hi = r - t, r + t
        return (ur - U(hi)) * weight(hi) + (ur - U(lo)) * weight(lo)

    inner = w * 2.0 ** (-_GRADING_LEVELS)

    def pair_scaled(t):
        return pair(t) / t ** (1.0 - 2.0 * sig)

    # low orders keep the nodes away from t = 0, where rounding in
    # U(r) - U(r +- t) is amplified by the kernel; the remaining
    # difference is reported in the error estimate
    shallow = cfg.with_overrides(jacobi_start=16, jacobi_max=64)
    v_in, e_in = jacobi_integrate(pair_scaled, inner, 1.0 - 2.0 * sig, shallow, tol_abs=tol_abs, tol_rel=tol_rel,
                                  strict=False)
    graded = [inner * 2.0 ** k for k in range(_GRADING_LEVELS + 1)]
    cuts = set(graded)
    for b in field.breakpoints:
        if 0.0 < abs(b - r) < w:
            cuts.add(abs(b - r))
    edges = sorted(cuts)
    v_pair, e_pair, _ = integrate_pieces(pair, list(zip(edges[:-1], edges[1:])), cfg,
                                         tol_abs=tol_abs, tol_rel=tol_rel)

    # the rest of [0, T] away from rho = r
    T = max(_far_edge(field, r + w), 2.0 * r)

    def outer(rho):
        return (ur - U(rho)) * weight(rho)

    pieces = _cut(0.0, r - w, field.breakpoints) + _cut(r + w, T, field.breakpoints)
    v_out, e_out, _ = integrate_pieces(outer, pieces, cfg, tol_abs=tol_abs, tol_rel=tol_rel)

    # rho >= T: rho = 1/s, rho^{n-1} H(r, rho) d rho = s^{2 sigma - 1} H(r s, 1) ds
    unit = PolarKernel(n, m, 0.0, cfg)

    def unit_h(s):
        unit.r = r * s
        return unit.moments(np.ones_like(s), 0)[:, 0]

    tail = field.tail
    if tail.exact and cfg.far_policy == "analytic_tail":
        v_far, e_far = jacobi_integrate(lambda s: ur * unit_h(s), 1.0 / T, 2.0 * sig - 1.0, cfg,
                                        tol_abs=tol_abs, tol_rel=tol_rel)
        for coef, q in tail.terms:
            v, e = jacobi_integrate(unit_h, 1.0 / T, 2.0 * sig + q - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
            v_far -= coef * v
            e_far += abs(coef) * e
    else:
        def h(s):
            return (ur - U(1.0 / s)) * unit_h(s)

        v_far, e_far = jacobi_integrate(h, 1.0 / T, 2.0 * sig - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
    return v_in + v_pair + v_out + v_far, e_in + e_pair + e_out + e_far
