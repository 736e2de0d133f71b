"""Integrals of a field against the kernel ``|x - y|^{-m}`` and its x-derivatives.

The integration region is always the complement of a ball ``|y| >= a``
about the origin, kept at positive distance from ``x`` so the kernel is
smooth there. Two methods are offered:

``"aligned"`` (radial fields centred at the origin)
    rotate so that ``x = r e_1``; the sphere of radius ``rho`` then only
    contributes through the polar angle, and first/second derivatives
    reduce to the scalar moments

        G   = int -m d^{-m-2} P,
        Hrr = int m(m+2) d^{-m-4} P^2 - m d^{-m-2},
        Htt = int m(m+2) d^{-m-4} T^2 - m d^{-m-2},

    with ``P = r - rho cos(theta)`` and ``T^2 = rho^2 sin^2(theta)/(n-1)``.
    The gradient is ``G xhat`` and the Hessian
    ``Hrr xhat xhat^T + Htt (I - xhat xhat^T)``.

``"full"`` (any field, n <= 3)
    a tensor rule on every sphere computes all components directly, so
    symmetry-based zeros (vanishing gradient or off-diagonal entries of a
    radial field at the origin) are genuinely computed rather than
    imposed.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import PointOutsideBall, SingularKernel, ToleranceNotMet
from ..specfun import FracParams, sphere_measures
from .fields import ScalarField
from .rules import DEFAULT_CONFIG, QuadConfig, gauss_legendre, integrate_pieces, jacobi_integrate
from .sphere import sphere_rule

__all__ = ["PolarKernel", "kernel_integral", "tail_integral", "kernel_derivative_integral"]

_TINY = 1e-300
_EPS = float(np.finfo(float).eps)


class PolarKernel:
    """Moments of the kernel over spheres ``|y| = rho`` seen from ``x = r e_1``.

    ``moments(rho, order)`` returns an array of shape ``(len(rho), k)``:
    ``k = 1`` for orders 0 and 1 (``H0`` and ``G``) and ``k = 2`` for
    order 2 (``Hrr``, ``Htt``). ``rho`` must differ from ``r``.

    For ``n >= 2`` the angle range ``[0, pi/2]`` is mapped by
    ``sin(theta/2) = a sinh(w)``, ``a = |r - rho| / (2 sqrt(r rho))``,
    whenever ``a`` is small; this flattens the near-singular peak of the
    kernel at ``theta = 0`` when the sphere passes close to ``x``.
    """

    def __init__(self, n: int, m: float, r, cfg: QuadConfig = DEFAULT_CONFIG, rel_tol: float | None = None):
        self.n, self.m, self.cfg = int(n), float(m), cfg
        self.r = r
        self.rel_tol = cfg.angular_rel_tol if rel_tol is None else rel_tol
        self.nodes = cfg.angular_start
        self.lower_area = sphere_measures(n - 1)[0] if n >= 2 else 0.0

    # per-node kernel factors --------------------------------------------
    def _combine(self, d2, P, T2, w, order):
        """Per-row sums and the sums of absolute summands (the cancellation scale)."""
        m = self.m
        if order == 0:
            terms = [w * d2 ** (-0.5 * m)]
        elif order == 1:
            terms = [w * (-m) * d2 ** (-0.5 * m - 1.0) * P]
        else:
            base = -m * d2 ** (-0.5 * m - 1.0)
            big = m * (m + 2.0) * d2 ** (-0.5 * m - 2.0)
            terms = [w * (big * P * P + base), w * (big * T2 + base)]
        val = np.stack([np.sum(t, axis=-1) for t in terms], axis=-1)
        scale = np.stack([np.sum(np.abs(t), axis=-1) for t in terms], axis=-1)
        return val, scale

    def _eval(self, rho: np.ndarray, order: int, nodes: int):
        n = self.n
        r = np.broadcast_to(np.asarray(self.r, dtype=float), rho.shape)
        if n == 1:
            P = np.stack([r - rho, r + rho], axis=-1)
            return self._combine(P * P, P, np.zeros_like(P), np.ones_like(P), order)

        gx, gw = gauss_legendre(nodes)
        rho_c = rho[:, None]
        r_c = r[:, None]
        # [pi/2, pi]: plain Gauss-Legendre
        th2 = 0.75 * math.pi + 0.25 * math.pi * gx
        s2 = np.broadcast_to(np.sin(0.5 * th2), (rho.size, nodes))
        w2 = np.broadcast_to(0.25 * math.pi * gw, (rho.size, nodes))

        # [0, pi/2]: sinh map for close spheres, otherwise plain rule
        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.abs(r - rho) / (2.0 * np.sqrt(r * rho))
        mapped = np.isfinite(a) & (a < 0.5) & (a > 0.0)
        th1 = 0.25 * math.pi + 0.25 * math.pi * gx
        s1 = np.broadcast_to(np.sin(0.5 * th1), (rho.size, nodes)).copy()
        w1 = np.broadcast_to(0.25 * math.pi * gw, (rho.size, nodes)).copy()
        if np.any(mapped):
            am = a[mapped][:, None]
            wmax = np.arcsinh(math.sqrt(0.5) / am)
            # two sub-pieces: the decaying core [0, min(W, 3)] and the rest
            w_cut = np.minimum(wmax, 3.0)
            hx, hw = gauss_legendre(max(nodes // 2, 4))
            ww = np.concatenate([0.5 * w_cut * (hx + 1.0),
                                 w_cut + 0.5 * (wmax - w_cut) * (hx + 1.0)], axis=-1)
            wt = np.concatenate([0.5 * w_cut * hw * np.ones_like(am),
                                 0.5 * (wmax - w_cut) * hw], axis=-1)
            sh = am * np.sinh(ww)
            half_cos = np.sqrt(np.maximum(1.0 - sh * sh, 0.0))
            jac = 2.0 * am * np.cosh(ww) / half_cos
            k = ww.shape[1]
            if k != nodes:
                # keep rectangular arrays: pad with zero-weight nodes
                pad = nodes - k
                sh = np.concatenate([sh, np.full((sh.shape[0], pad), 0.5)], axis=1)
                wt = np.concatenate([wt, np.zeros((wt.shape[0], pad))], axis=1)
                jac = np.concatenate([jac, np.ones((jac.shape[0], pad))], axis=1)
            s1[mapped] = sh
            w1[mapped] = wt * jac

        s = np.concatenate([s1, s2], axis=1)
        w = np.concatenate([w1, w2], axis=1)
        sin2 = s * s
        d2 = (r_c - rho_c) ** 2 + 4.0 * r_c * rho_c * sin2
        P = r_c - rho_c + 2.0 * rho_c * sin2
        sin_th2 = 4.0 * sin2 * np.maximum(1.0 - sin2, 0.0)
        T2 = rho_c * rho_c * sin_th2 / (n - 1)
        if n > 2:
            w = w * sin_th2 ** (0.5 * (n - 2))
        d2 = np.maximum(d2, _TINY)
        val, scale = self._combine(d2, P, T2, w, order)
        return self.lower_area * val, self.lower_area * scale

    def moments(self, rho, order: int = 0) -> np.ndarray:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        if self.n == 1:
            return self._eval(rho, order, 0)[0]
        nodes = self.nodes
        prev, _ = self._eval(rho, order, nodes)
        while True:
            nodes *= 2
            cur, scale = self._eval(rho, order, nodes)
            # components that cancel to rounding level are accepted against their summand scale
            gap = np.abs(cur - prev) - self.rel_tol * float(np.max(np.abs(cur))) - 1e3 * _EPS * scale
            if float(np.max(gap)) <= _TINY:
                self.nodes = max(self.cfg.angular_start, nodes // 2)
                return cur
            if nodes >= self.cfg.angular_max:
                diff = float(np.max(np.abs(cur - prev)))
                raise ToleranceNotMet(f"polar kernel rule did not converge ({diff:.3e} at {nodes} nodes)")
            prev = cur


class _FullKernel:
    """All components of ``int_{|y| = rho} g(y) D^k |x - y|^{-m} dS(y) / rho^{n-1}``."""

    def __init__(self, field: ScalarField, x: np.ndarray, m: float, order: int, cfg: QuadConfig):
        self.field, self.x, self.m, self.order, self.cfg = field, x, float(m), order, cfg
        self.n = field.dimension
        self.nodes = cfg.angular_start

    def kernel_terms(self, z: np.ndarray) -> np.ndarray:
        """``D^k |z|^{-m}`` flattened along the last axis."""
        m, n = self.m, self.n
        d2 = np.maximum(np.sum(z * z, axis=-1), _TINY)
        if self.order == 0:
            return (d2 ** (-0.5 * m))[..., None]
        if self.order == 1:
            return (-m) * (d2 ** (-0.5 * m - 1.0))[..., None] * z
        outer = z[..., :, None] * z[..., None, :]
        eye = np.eye(n)
        hess = (m * (m + 2.0) * d2 ** (-0.5 * m - 2.0))[..., None, None] * outer \
            - (m * d2 ** (-0.5 * m - 1.0))[..., None, None] * eye
        return hess.reshape(z.shape[:-1] + (n * n,))

    def _eval(self, rho: np.ndarray, nodes: int, weight_fn) -> np.ndarray:
        dirs, w = sphere_rule(self.n, nodes)
        vals = weight_fn(rho, dirs)  # (M, N) field factor
        z = self._z(rho, dirs)
        ker = self.kernel_terms(z)  # (M, N, k)
        val = np.einsum("mn,n,mnk->mk", vals, w, ker)
        scale = float(np.max(np.einsum("mn,n,mnk->mk", np.abs(vals), w, np.abs(ker))))
        return val, scale

    def _z(self, rho, dirs):
        return self.x[None, None, :] - rho[:, None, None] * dirs[None, :, :]

    def moments(self, rho, weight_fn) -> np.ndarray:
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        if self.n == 1:
            return self._eval(rho, 0, weight_fn)[0]
        nodes = self.nodes
        prev, _ = self._eval(rho, nodes, weight_fn)
        while True:
            nodes *= 2
            cur, scale = self._eval(rho, nodes, weight_fn)
            diff = float(np.max(np.abs(cur - prev)))
            # components that vanish by symmetry only reach rounding level
            floor = 1e3 * np.finfo(float).eps * scale
            if diff <= self.cfg.angular_rel_tol * float(np.max(np.abs(cur))) + floor + _TINY:
                self.nodes = max(self.cfg.angular_start, nodes // 2)
                return cur
            if nodes >= self.cfg.angular_max:
                raise ToleranceNotMet(f"spherical tensor rule did not converge ({diff:.3e})")
            prev = cur


class _FarFullKernel(_FullKernel):
    """Same as :class:`_FullKernel` but in the inverted variable ``s = 1/rho``."""

    def _z(self, s, dirs):
        return self.x[None, None, :] * s[:, None, None] - dirs[None, :, :]


def _point(x, n):
    p = np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1)
    if p.size != n:
        raise ValueError(f"point has {p.size} coordinates, expected {n}")
    return p


def kernel_integral(
    field: ScalarField,
    x,
    params: FracParams,
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    order: int = 0,
    lower: float = 0.0,
    method: str = "auto",
):
    """``int_{|y| >= lower} g(y) D_x^order |x - y|^{-n-2 sigma} dy`` (no normalization constant).

    The effective inner radius is ``max(lower, field.support_inner)`` and
    must exceed ``|x|``.

    Returns a float (order 0), an ``(n,)`` vector (order 1) or a symmetric
    ``(n, n)`` matrix (order 2), together with an error estimate.

    Raises
    ------
    SingularKernel
        ``x`` is not strictly inside the hole of the integration region.
    """
    n = field.dimension
    if n != params.n:
        raise ValueError(f"field lives in R^{n} but params are for n={params.n}")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    x = _point(x, n)
    a = max(float(lower), field.support_inner)
    r = float(np.linalg.norm(x))
    if not r < a:
        raise SingularKernel(f"|x| = {r:.6g} is not inside the integration hole of radius {a:.6g}")
    field.tail.certify(params.sigma)
    centred = field.center is None
    if method == "auto":
        method = "aligned" if (field.is_radial and centred) else "full"
    if method == "aligned":
        if not (field.is_radial and centred):
            raise ValueError("aligned method needs a radial field centred at the origin")
        return _aligned(field, x, r, a, params, cfg, order)
    if method == "full":
        return _full(field, x, a, params, cfg, order)
    raise ValueError(f"unknown method {method!r}")


def _rho_pieces(field, a, far):
    cuts = {a, far}
    for b in field.breakpoints:
        if a < b < far:
            cuts.add(b)
    edges = sorted(cuts)
    return list(zip(edges[:-1], edges[1:]))


def _far_start(field, a, r):
    onset = field.tail.onset + (0.0 if field.center is None else float(np.linalg.norm(field.center_array)))
    return max(a, onset, 2.0 * r)


def _aligned(field, x, r, a, params, cfg, order):
    n, sig = field.dimension, params.sigma
    m = params.kernel_power
    pk = PolarKernel(n, m, r, cfg)
    prof = field.profile
    far = _far_start(field, a, r)
    tol_abs, tol_rel = cfg.abs_tol, cfg.rel_tol

    def f(rho):
        return (prof(rho) * rho ** (n - 1))[:, None] * pk.moments(rho, order)

    val, err, _ = integrate_pieces(f, _rho_pieces(field, a, far), cfg, tol_abs=tol_abs, tol_rel=tol_rel)
    val = np.asarray(val, dtype=float).reshape(-1)

    # beyond ``far``: y = w/s, kernel moment of order k scales like s^{m+k}
    unit = PolarKernel(n, m, r, cfg)
    tail = field.tail
    if tail.exact and cfg.far_policy == "analytic_tail":
        for coef, q in tail.terms:
            def h(s, _q=q):
                return _unit_moments(unit, s, r, order)

            v, e = jacobi_integrate(h, 1.0 / far, 2.0 * sig + q + order - 1.0, cfg,
                                    tol_abs=tol_abs, tol_rel=tol_rel)
            val = val + coef * np.asarray(v).reshape(-1)
            err += abs(coef) * e
    elif not (tail.kind == "compact" and far >= tail.onset):
        def h(s):
            return prof(1.0 / s)[:, None] * _unit_moments(unit, s, r, order)

        v, e = jacobi_integrate(h, 1.0 / far, 2.0 * sig + order - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
        val = val + np.asarray(v).reshape(-1)
        err += e
    return _assemble(val, x, r, n, order), float(err)


def _unit_moments(pk: PolarKernel, s, r, order):
    """Moments for the unit sphere seen from ``r s e_1``, i.e. ``M(r, 1/s) s^{-m-k}``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    pk.r = r * s
    return pk.moments(np.ones_like(s), order)


def _assemble(val, x, r, n, order):
    if order == 0:
        return float(val[0])
    xhat = x / r if r > 0.0 else np.eye(n)[0]
    if order == 1:
        return val[0] * xhat if r > 0.0 else np.zeros(n)
    hrr, htt = float(val[0]), float(val[1]) if n > 1 else 0.0
    P = np.outer(xhat, xhat)
    return hrr * P + htt * (np.eye(n) - P)


def _full(field, x, a, params, cfg, order):
    n, sig = field.dimension, params.sigma
    m = params.kernel_power
    far = _far_start(field, a, float(np.linalg.norm(x)))
    ker = _FullKernel(field, x, m, order, cfg)
    tol_abs, tol_rel = cfg.abs_tol, cfg.rel_tol

    def near_weights(rho, dirs):
        y = rho[:, None, None] * dirs[None, :, :]
        return field(y)

    def f(rho):
        return rho[:, None] ** (n - 1) * ker.moments(rho, near_weights)

    val, err, _ = integrate_pieces(f, _rho_pieces(field, a, far), cfg, tol_abs=tol_abs, tol_rel=tol_rel)
    val = np.asarray(val, dtype=float).reshape(-1)
    tail = field.tail
    farker = _FarFullKernel(field, x, m, order, cfg)
    if tail.exact and cfg.far_policy == "analytic_tail" and field.center is None:
        for coef, q in tail.terms:
            def h(s):
                return farker.moments(s, lambda s_, d: np.ones((s_.size, d.shape[0])))

            v, e = jacobi_integrate(h, 1.0 / far, 2.0 * sig + q + order - 1.0, cfg,
                                    tol_abs=tol_abs, tol_rel=tol_rel)
            val = val + coef * np.asarray(v).reshape(-1)
            err += abs(coef) * e
    elif not (tail.kind == "compact" and far >= tail.onset + float(np.linalg.norm(field.center_array))):
        def far_weights(s, dirs):
            return field(dirs[None, :, :] / s[:, None, None])

        def h(s):
            return farker.moments(s, far_weights)

        v, e = jacobi_integrate(h, 1.0 / far, 2.0 * sig + order - 1.0, cfg, tol_abs=tol_abs, tol_rel=tol_rel)
        val = val + np.asarray(v).reshape(-1)
        err += e
    if order == 0:
        return float(val[0]), float(err)
    if order == 1:
        return val, float(err)
    H = val.reshape(n, n)
    return 0.5 * (H + H.T), float(err)


def tail_integral(
    field: ScalarField,
    x,
    R: float,
    params: FracParams,
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    method: str = "auto",
) -> tuple[float, float]:
    """Tail mass ``c_{n,s} int_{|y| >= R} u(y) |x - y|^{-n-2s} dy``; returns ``(value, err)``.

    Raises
    ------
    PointOutsideBall
        ``|x| >= R``.
    """
    x = _point(x, field.dimension)
    if not float(np.linalg.norm(x)) < R:
        raise PointOutsideBall(f"|x| = {np.linalg.norm(x):.6g} must be smaller than R = {R}")
    # the tail of u beyond R does not care about an inner support hole
    v, e = kernel_integral(field, x, params, cfg, order=0, lower=max(R, field.support_inner), method=method)
    return params.c * v, params.c * e


def kernel_derivative_integral(
    field: ScalarField,
    x,
    order: int,
    params: FracParams,
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    method: str = "auto",
):
    """Gradient (order 1) or Hessian (order 2) of ``x -> int g(y) |x - y|^{-n-2s} dy``.

    ``g`` is ``field``; its support must lie outside ``B_{field.support_inner}``
    and ``x`` strictly inside that ball. No normalization constant is applied.
    Returns ``(value, err)``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if not field.support_inner > 0.0:
        raise SingularKernel("integrand support must be bounded away from the evaluation point")
    return kernel_integral(field, x, params, cfg, order=order, lower=0.0, method=method)
