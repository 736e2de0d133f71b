"""Split of ``(-Delta)^s u - (-Delta)^s u_i`` into near, far and tail parts.

For ``d = u - u_i``,

    A = c int_{B_R} (d(x) - d(y)) k(x - y) dy       (principal value),
    E = c int_{B_R^c} (d(x) - u(y)) k(x - y) dy,
    F = c int_{B_R^c} u_i(y) k(x - y) dy,

with ``k(z) = |z|^{-n-2s}``, so that ``A + E + F = (-Delta)^s d (x)``.
``A`` is evaluated as ``(-Delta)^s (d 1_{B_R}) (x) - d(x) c int_{B_R^c} k``
and ``E`` as ``d(x) c int_{B_R^c} k - F[u]``. The identity is then checked
against the two operators evaluated independently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import NotRadial, RadiusTooSmall
from ..quadrature.fields import ScalarField, SmoothWindow, TailDescriptor
from ..quadrature.kernel import tail_integral
from ..quadrature.pv import fraclap_pv
from ..quadrature.rules import DEFAULT_CONFIG, QuadConfig
from ..specfun import FracParams
from .sequence import FunctionSequence

__all__ = ["AEFDecomposition", "aef_decompose", "truncated_difference"]


@dataclass(frozen=True)
class AEFDecomposition:
    A: float
    E: float
    F: float
    residual: float
    tolerance: float
    direct: float
    i: float
    x: tuple
    R: float

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["x"] = list(self.x)
        return d


def truncated_difference(u: ScalarField, v: ScalarField, R: float) -> ScalarField:
    """The field ``(u - v) 1_{B_R}`` (both radial about 0, or ``n = 1``)."""
    n = u.dimension
    if v.dimension != n:
        raise ValueError("fields live in different dimensions")
    outer = min(u.window.outer, v.window.outer, R)
    inners = [w.inner for w in (u.window, v.window) if w.inner is not None]
    window = SmoothWindow(outer, max(inners) if inners else None)
    bps = sorted({b for b in (*u.breakpoints, *v.breakpoints) if b < R} | {R})
    name = f"({u.name} - {v.name}) 1_B{R:g}"
    radial = u.is_radial and v.is_radial and u.center is None and v.center is None
    if radial:
        pu, pv = u.profile, v.profile

        def prof(rho, _a=pu, _b=pv, _R=R):
            rho = np.asarray(rho, dtype=float)
            return np.where(rho < _R, _a(rho) - _b(rho), 0.0)

        return ScalarField.from_profile(n, prof, TailDescriptor.compact(R), bps, window=window, name=name)
    if n != 1:
        raise NotRadial("the truncated difference needs radial fields about 0 when n > 1")

    def func(points, _a=u, _b=v, _R=R):
        pts = np.asarray(points, dtype=float)
        inside = np.linalg.norm(pts, axis=-1) < _R
        return np.where(inside, _a.func(pts) - _b.func(pts), 0.0)

    return ScalarField(n, func, TailDescriptor.compact(R), breakpoints=tuple(bps), window=window, name=name)


def aef_decompose(seq: FunctionSequence, i, x, R: float, params: FracParams,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> AEFDecomposition:
    """Decompose ``(-Delta)^s u (x) - (-Delta)^s u_i (x)`` at radius ``R``.

    ``tolerance`` is twice the sum over the six evaluated quantities of
    ``max(error estimate, abs_tol, rel_tol * |value|)``.

    Raises
    ------
    RadiusTooSmall
        ``R < 2 (|x| + 1)``.
    """
    n = params.n
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(n)
    R = float(R)
    if R < 2.0 * (np.linalg.norm(x) + 1.0):
        raise RadiusTooSmall(f"R = {R} is below 2(|x| + 1) = {2.0 * (np.linalg.norm(x) + 1.0):.6g}")
    u = seq.limit_field
    ui = seq.member(i)
    d_x = float(u(x)) - float(ui(x))
    one = ScalarField.constant(n, 1.0)

    parts = []

    def run(fn, *args):
        v, e = fn(*args, params, cfg)
        parts.append((v, e))
        return v

    inner = run(fraclap_pv, truncated_difference(u, ui, R), x)
    mass = run(tail_integral, one, x, R)
    Fu = run(tail_integral, u, x, R)
    F = run(tail_integral, ui, x, R)
    direct = run(fraclap_pv, u, x) - run(fraclap_pv, ui, x)
    A = inner - d_x * mass
    E = d_x * mass - Fu
    resid = (A + E + F) - direct
    tol = 2.0 * sum(max(e, cfg.abs_tol, cfg.rel_tol * abs(v)) for v, e in parts)
    return AEFDecomposition(A, E, F, resid, tol, direct, float(i), tuple(x.tolist()), R)
