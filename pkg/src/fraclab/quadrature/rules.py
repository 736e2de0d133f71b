"""Quadrature rules and the deterministic adaptive integrator.

Two building blocks are used everywhere else:

* :func:`integrate_pieces` integrates a (possibly vector valued) function
  over a list of intervals by global adaptive bisection. Each interval is
  first pulled back through ``t = a + (b - a)(1 - cos phi)/2`` so square-root
  type endpoint behaviour (sphere tangencies) becomes smooth.
* :func:`jacobi_integrate` integrates ``s**alpha * h(s)`` on ``[0, L]`` with
  Gauss-Jacobi rules of doubling order; it carries the algebraic endpoint
  behaviour of near fields and mapped far fields.

Sums are taken in a fixed order so results are bitwise reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi

from ..errors import ToleranceNotMet

__all__ = [
    "QuadConfig",
    "DEFAULT_CONFIG",
    "gauss_legendre",
    "gauss_jacobi01",
    "integrate_pieces",
    "jacobi_integrate",
]


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and limits for every integral in the package.

    ``near_radius`` of ``None`` means ``min(0.5, margin / 2)`` where
    ``margin`` is the distance from the evaluation point to the edge of
    the field's smooth window.
    """

    near_radius: float | None = None
    rel_tol: float = 1e-8
    abs_tol: float = 1e-9
    max_subdiv: int = 60
    far_policy: str = "analytic_tail"
    richardson_steps: int = 4
    gauss_order: int = 16
    angular_start: int = 16
    angular_max: int = 2048
    jacobi_start: int = 16
    jacobi_max: int = 512

    def __post_init__(self):
        if self.far_policy not in ("analytic_tail", "mapped_quadrature"):
            raise ValueError(f"unknown far_policy {self.far_policy!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.near_radius is not None and not self.near_radius > 0:
            raise ValueError("near_radius must be positive")
        if self.max_subdiv < 0 or self.gauss_order < 2:
            raise ValueError("bad subdivision settings")

    def with_overrides(self, **kw) -> "QuadConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @property
    def angular_rel_tol(self) -> float:
        return 1e-2 * self.rel_tol

    def to_dict(self) -> dict:
        return dict(self.__dict__)


DEFAULT_CONFIG = QuadConfig()


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def gauss_jacobi01(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Rule for ``int_0^1 s**alpha f(s) ds`` (requires ``alpha > -1``)."""
    if not alpha > -1.0:
        raise ValueError(f"Jacobi exponent must exceed -1, got {alpha}")
    x, w = roots_jacobi(int(n), 0.0, float(alpha))
    s = 0.5 * (x + 1.0)
    w = w * 0.5 ** (1.0 + alpha)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


def _norm(v) -> float:
    return float(np.max(np.abs(v))) if np.ndim(v) else abs(float(v))


def _ordered_sum(values: Sequence):
    """Compensated sum in list order; works for scalars and equal-shape arrays."""
    first = np.asarray(values[0], dtype=float)
    if first.ndim == 0:
        return math.fsum(float(v) for v in values)
    stack = np.stack([np.asarray(v, dtype=float) for v in values]).reshape(len(values), -1)
    out = np.array([math.fsum(stack[:, k]) for k in range(stack.shape[1])])
    return out.reshape(first.shape)


@dataclass
class _Interval:
    piece: int
    lo: float
    hi: float
    whole: object
    left: object = None
    right: object = None

    @property
    def est(self):
        return self.left + self.right

    @property
    def err(self) -> float:
        return _norm(self.whole - (self.left + self.right))


def integrate_pieces(
    f: Callable[[np.ndarray], np.ndarray],
    pieces: Sequence[tuple[float, float]],
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    tol_abs: float | None = None,
    tol_rel: float | None = None,
    cos_map: bool = True,
) -> tuple[object, float, int]:
    """Adaptive integral of ``f`` over the union of ``pieces``.

    ``f`` receives a 1-d array of abscissae and returns values with that
    leading axis (trailing axes allowed for vector integrands).

    Returns ``(value, error_estimate, subdivisions)``. Raises
    :class:`ToleranceNotMet` once ``cfg.max_subdiv`` bisections have been
    spent without meeting ``max(tol_abs, tol_rel * |value|)``.
    """
    tol_abs = cfg.abs_tol if tol_abs is None else tol_abs
    tol_rel = cfg.rel_tol if tol_rel is None else tol_rel
    pieces = [(float(a), float(b)) for a, b in pieces if b > a]
    if not pieces:
        return 0.0, 0.0, 0
    gx, gw = gauss_legendre(cfg.gauss_order)
    k = gx.size
    span = math.pi if cos_map else 1.0

    def rule(ivs: list[tuple[int, float, float]]):
        # one call of f for all requested intervals
        nodes, weights = [], []
        for p, lo, hi in ivs:
            a, b = pieces[p]
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            u = mid + half * gx
            if cos_map:
                t = a + 0.5 * (b - a) * (1.0 - np.cos(u))
                jac = 0.5 * (b - a) * np.sin(u)
            else:
                t = a + (b - a) * u
                jac = np.full(k, b - a)
            nodes.append(t)
            weights.append(half * gw * jac)
        vals = np.asarray(f(np.concatenate(nodes)), dtype=float)
        out = []
        for j in range(len(ivs)):
            v = vals[j * k:(j + 1) * k]
            w = weights[j]
            out.append(np.tensordot(w, v, axes=(0, 0)) if v.ndim > 1 else float(np.dot(w, v)))
        return out

    def split_rules(ivs: list[_Interval]):
        req = []
        for iv in ivs:
            mid = 0.5 * (iv.lo + iv.hi)
            req += [(iv.piece, iv.lo, mid), (iv.piece, mid, iv.hi)]
        res = rule(req)
        for j, iv in enumerate(ivs):
            iv.left, iv.right = res[2 * j], res[2 * j + 1]

    init = [(p, 0.0, span) for p in range(len(pieces))]
    wholes = rule(init)
    intervals = [_Interval(p, lo, hi, w) for (p, lo, hi), w in zip(init, wholes)]
    split_rules(intervals)

    nsub = 0
    while True:
        intervals.sort(key=lambda iv: (iv.piece, iv.lo))
        total = _ordered_sum([iv.est for iv in intervals])
        errs = [iv.err for iv in intervals]
        total_err = math.fsum(errs)
        target = max(tol_abs, tol_rel * _norm(total))
        if total_err <= target:
            return total, total_err, nsub
        if nsub >= cfg.max_subdiv:
            raise ToleranceNotMet(
                f"adaptive quadrature: error {total_err:.3e} > target {target:.3e} "
                f"after {nsub} subdivisions"
            )
        worst = max(range(len(intervals)), key=lambda j: (errs[j], -j))
        iv = intervals.pop(worst)
        mid = 0.5 * (iv.lo + iv.hi)
        kids = [_Interval(iv.piece, iv.lo, mid, iv.left), _Interval(iv.piece, mid, iv.hi, iv.right)]
        split_rules(kids)
        intervals += kids
        nsub += 1


def jacobi_integrate(
    h: Callable[[np.ndarray], np.ndarray],
    length: float,
    alpha: float,
    cfg: QuadConfig = DEFAULT_CONFIG,
    *,
    tol_abs: float | None = None,
    tol_rel: float | None = None,
    strict: bool = True,
) -> tuple[object, float]:
    """``int_0^length s**alpha h(s) ds`` by Gauss-Jacobi rules of doubling order.

    With ``strict=False`` the last estimate and its difference-based error
    are returned instead of raising when ``cfg.jacobi_max`` is reached.
    """
    tol_abs = cfg.abs_tol if tol_abs is None else tol_abs
    tol_rel = cfg.rel_tol if tol_rel is None else tol_rel
    if length <= 0.0:
        return 0.0, 0.0
    scale = length ** (1.0 + alpha)

    def apply(npts):
        s, w = gauss_jacobi01(npts, alpha)
        v = np.asarray(h(length * s), dtype=float)
        return scale * (np.tensordot(w, v, axes=(0, 0)) if v.ndim > 1 else float(np.dot(w, v)))

    npts = cfg.jacobi_start
    prev = apply(npts)
    while True:
        npts *= 2
        cur = apply(npts)
        err = _norm(cur - prev)
        if err <= max(tol_abs, tol_rel * _norm(cur)):
            return cur, err
        if npts >= cfg.jacobi_max:
            if not strict:
                return cur, err
            raise ToleranceNotMet(
                f"Gauss-Jacobi ({alpha=:.3g}) did not settle: difference {err:.3e} at {npts} nodes"
            )
        prev = cur
