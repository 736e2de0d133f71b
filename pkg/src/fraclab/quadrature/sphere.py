"""Integrals over spheres: means of fields on spheres about a point.

For a field that is radial about a center ``c`` the mean over the sphere
of radius ``t`` about ``x`` only depends on the polar angle measured from
``x - c``, so it reduces to

    |S^{n-2}| int_0^pi sin^{n-2}(theta) U(rho(theta)) d theta,
    rho^2 = (r - t)^2 + 4 r t cos^2(theta / 2),   r = |x - c|,

which is split exactly at the angles where the sphere crosses one of the
profile's breakpoints. Fields without a profile use a tensor rule on the
sphere (n = 2, 3).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import FracLabError, ToleranceNotMet
from ..specfun import sphere_measures
from .rules import QuadConfig, gauss_legendre

__all__ = ["crossing_edges", "aligned_mean", "sphere_rule", "SphericalMeans"]


def crossing_edges(breakpoints, r: float, t: np.ndarray) -> np.ndarray:
    """Sorted polar angles ``[0, theta_1, ..., pi]`` per row of ``t``."""
    t = np.asarray(t, dtype=float)
    if len(breakpoints) == 0:
        return np.stack([np.zeros_like(t), np.full_like(t, math.pi)], axis=-1)
    b = np.asarray(breakpoints, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_k = (b[None, :] ** 2 - r * r - t[:, None] ** 2) / (2.0 * r * t[:, None])
    theta = np.arccos(np.clip(cos_k, -1.0, 1.0))
    edges = np.concatenate([np.zeros((t.size, 1)), theta, np.full((t.size, 1), math.pi)], axis=1)
    return np.sort(edges, axis=1)


def aligned_mean(profile, breakpoints, n: int, r: float, t: np.ndarray, nodes: int,
                 offset: float = 0.0) -> np.ndarray:
    """Integral of ``U(|x - c + t w|) - offset`` over the unit sphere, ``r = |x - c| > 0``.

    Uses ``nodes`` Gauss points on every angular piece between crossings.
    """
    t = np.asarray(t, dtype=float)
    gx, gw = gauss_legendre(nodes)
    edges = crossing_edges(breakpoints, r, t)
    lo, hi = edges[:, :-1], edges[:, 1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    theta = mid[..., None] + half[..., None] * gx
    weights = half[..., None] * gw
    rho2 = (r - t[:, None, None]) ** 2 + 4.0 * r * t[:, None, None] * np.cos(0.5 * theta) ** 2
    vals = profile(np.sqrt(rho2))
    if offset:
        vals = vals - offset
    if n > 2:
        vals = vals * np.sin(theta) ** (n - 2)
    lower_area = sphere_measures(n - 1)[0]
    return lower_area * np.einsum("mpk,mpk->m", weights, vals)


def sphere_rule(n: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor rule on S^{n-1}: directions of shape (N, n) and weights summing to |S^{n-1}|."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        th = 2.0 * math.pi * np.arange(nodes) / nodes
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(nodes, 2.0 * math.pi / nodes)
    if n == 3:
        z, wz = gauss_legendre(nodes)
        m = 2 * nodes
        ph = 2.0 * math.pi * np.arange(m) / m
        zz, pp = np.meshgrid(z, ph, indexing="ij")
        s = np.sqrt(1.0 - zz ** 2)
        dirs = np.stack([s * np.cos(pp), s * np.sin(pp), zz], axis=-1).reshape(-1, 3)
        w = (wz[:, None] * np.full(m, 2.0 * math.pi / m)[None, :]).reshape(-1)
        return dirs, w
    raise FracLabError("tensor sphere rules are implemented for n <= 3; use a radial field")


class SphericalMeans:
    """Callable ``t -> int_{S^{n-1}} (u(x) - u(x + t w)) dw`` (the spherical deficit).

    The difference is formed pointwise before summation so constant parts
    cancel exactly. The angular order is doubled until two successive
    orders agree to ``cfg.angular_rel_tol`` (relative, with a floor at a few
    hundred ulps of ``|S^{n-1}| |u(x)|``); the converged order is remembered
    between calls so one evaluation of the operator pays the search once.
    """

    def __init__(self, field, x: np.ndarray, cfg: QuadConfig, *, use_radial: bool = True):
        self.field = field
        self.x = np.asarray(x, dtype=float)
        self.n = field.dimension
        self.cfg = cfg
        self.r = field.radius_of(self.x)
        self.radial = use_radial and field.is_radial
        self.nodes = cfg.angular_start
        self.area = sphere_measures(self.n)[0]
        self.u0 = float(field(self.x))
        self.floor = 256.0 * np.finfo(float).eps * self.area * abs(self.u0)

    def _at(self, t: np.ndarray, nodes: int) -> np.ndarray:
        n, u0 = self.n, self.u0
        if n == 1:
            pts = np.concatenate([self.x + t[:, None], self.x - t[:, None]], axis=0)
            v = u0 - self.field(pts)
            return v[: t.size] + v[t.size:]
        if self.radial:
            if self.r == 0.0:
                return self.area * (u0 - self.field.profile(t))
            return -aligned_mean(self.field.profile, self.field.breakpoints, n, self.r, t, nodes,
                                 offset=u0)
        dirs, w = sphere_rule(n, nodes)
        pts = self.x[None, None, :] + t[:, None, None] * dirs[None, :, :]
        return (u0 - self.field(pts)) @ w

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.n == 1 or (self.radial and self.r == 0.0):
            return self._at(t, 0)
        nodes = self.nodes
        prev = self._at(t, nodes)
        while True:
            nodes *= 2
            cur = self._at(t, nodes)
            diff = float(np.max(np.abs(cur - prev)))
            if diff <= self.cfg.angular_rel_tol * float(np.max(np.abs(cur))) + self.floor:
                self.nodes = max(self.cfg.angular_start, nodes // 2)
                return cur
            if nodes >= self.cfg.angular_max:
                raise ToleranceNotMet(
                    f"angular rule did not converge with {nodes} nodes (difference {diff:.3e})"
                )
            prev = cur
