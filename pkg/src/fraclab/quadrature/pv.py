"""Principal-value evaluation of the fractional Laplacian at a point.

In polar coordinates about the evaluation point ``x``,

    (-Delta)^s u(x) = c_{n,s} int_0^inf t^{-1-2s} (|S^{n-1}| u(x) - S(t)) dt,

with ``S(t)`` the integral of ``u`` over the sphere of radius ``t`` about
``x``. Because ``S`` is even in the direction variable this is exactly the
symmetrized second-difference form, so the integrand is ``O(t^{1-2s})`` at
the origin and no principal value remains. The radial integral is split
into a near part ``[0, delta]`` (Gauss-Jacobi), a middle part cut at every
radius where the sphere touches a breakpoint of the field (adaptive), and
a far part beyond which the sphere only sees the field's tail.
"""

from __future__ import annotations

import numpy as np

from ..errors import NonSmoothPoint
from ..specfun import FracParams
from .fields import ScalarField
from .rules import DEFAULT_CONFIG, QuadConfig, integrate_pieces, jacobi_integrate
from .sphere import SphericalMeans, aligned_mean

__all__ = ["fraclap_pv", "near_radius_for", "tail_sphere_mean"]


def _as_point(x, n: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1)
    if p.size != n:
        raise ValueError(f"point has {p.size} coordinates, field lives in R^{n}")
    return p


def near_radius_for(field: ScalarField, x, cfg: QuadConfig) -> float:
    """Radius of the symmetrized near ball; raises :class:`NonSmoothPoint` when illegal."""
    margin = field.margin_at(x)
    if not margin > 0.0:
        raise NonSmoothPoint(f"{field.name}: point {np.asarray(x).tolist()} is outside the smooth window")
    if cfg.near_radius is None:
        return min(0.5, 0.5 * margin)
    if cfg.near_radius >= margin:
        raise NonSmoothPoint(
            f"{field.name}: near radius {cfg.near_radius} exceeds smooth margin {margin:.3g}"
        )
    return cfg.near_radius


def tail_sphere_mean(n: int, q: float, r: float, s, nodes: int = 64) -> np.ndarray:
    """``int_{S^{n-1}} |w + s r e|^{-q} dw`` for ``s r < 1`` (any unit ``e``)."""
    eps = np.asarray(s, dtype=float) * r
    if n == 1:
        return (1.0 + eps) ** (-q) + np.abs(1.0 - eps) ** (-q)

    def prof(rho, _q=q):
        return rho ** (-_q)

    # |w + eps e| and |e + eps w| share the polar-angle law
    return aligned_mean(prof, (), n, 1.0, eps, nodes)


def fraclap_pv(
    field: ScalarField,
    x,
    params: FracParams,
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    use_radial: bool = True,
) -> tuple[float, float]:
    """Evaluate ``(-Delta)^sigma u(x)``; returns ``(value, error_estimate)``.

    ``use_radial=False`` forces the tensor spherical rule even when the
    field has a radial profile (n <= 3).

    Raises
    ------
    NonSmoothPoint
        ``x`` is not inside the field's smooth window with room for the near ball.
    DivergentTail
        the tail descriptor does not certify the weighted integrability.
    ToleranceNotMet
        an adaptive stage ran out of budget.
    """
    n = field.dimension
    if n != params.n:
        raise ValueError(f"field lives in R^{n} but params are for n={params.n}")
    x = _as_point(x, n)
    sig = params.sigma
    field.tail.certify(sig)
    delta = near_radius_for(field, x, cfg)

    u0 = float(field(x))
    area = params.sphere_area
    base = area * u0
    means = SphericalMeans(field, x, cfg, use_radial=use_radial)
    tol_abs = cfg.abs_tol / (3.0 * params.c)
    tol_rel = cfg.rel_tol

    # near ball: weight t^{1-2s}, smooth remainder (|S|u(x) - S(t)) / t^2
    def near(t):
        return means(t) / (t * t)

    v_near, e_near = jacobi_integrate(near, delta, 1.0 - 2.0 * sig, cfg, tol_abs=tol_abs, tol_rel=tol_rel)

    # middle annulus, cut where the sphere about x touches a breakpoint
    r = means.r
    far_start = max(delta, r + field.tail.onset)
    cuts = {delta, far_start}
    for b in field.breakpoints:
        for t in (abs(r - b), r + b):
            if delta < t < far_start:
                cuts.add(t)
    edges = sorted(cuts)

    def mid(t):
        return t ** (-1.0 - 2.0 * sig) * means(t)

    v_mid, e_mid, _ = integrate_pieces(
        mid, list(zip(edges[:-1], edges[1:])), cfg, tol_abs=tol_abs, tol_rel=tol_rel
    )

    v_far, e_far = _far_field(field, means, base, far_start, params, cfg, tol_abs, tol_rel)
    value = params.c * (v_near + v_mid + v_far)
    err = params.c * (e_near + e_mid + e_far)
    return float(value), float(err)


def _far_field(field, means, base, T, params, cfg, tol_abs, tol_rel):
    sig = params.sigma
    tail = field.tail
    # part carried by u(x): int_T^inf t^{-1-2s} |S| u(x) dt
    own = base * T ** (-2.0 * sig) / (2.0 * sig)
    if cfg.far_policy == "analytic_tail" and tail.exact:
        if tail.kind == "compact":
            return own, 0.0
        total, err = own, 0.0
        for coef, q in tail.terms:
            if q == 0.0:
                total -= coef * params.sphere_area * T ** (-2.0 * sig) / (2.0 * sig)
                continue
            # sphere of radius t = 1/s about x sees coef |x - c + t w|^{-q} = coef s^q |w + s(x-c)|^{-q}
            def h(s, _q=q):
                return tail_sphere_mean(params.n, _q, means.r, s)

            v, e = jacobi_integrate(h, 1.0 / T, 2.0 * sig + q - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
            total -= coef * v
            err += abs(coef) * e
        return total, err

    # mapped quadrature: t = 1/s, weight s^{2s-1}
    def h(s):
        return means(1.0 / s)

    return jacobi_integrate(h, 1.0 / T, 2.0 * sig - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
