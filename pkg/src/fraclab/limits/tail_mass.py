"""Tail masses ``F_i(x, R)`` and the iterated limit ``b = lim_R lim_i F_i(x, R)``."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..errors import NonConvergent, PointOutsideBall
from ..quadrature.fields import ScalarField
from ..quadrature.kernel import tail_integral
from ..quadrature.pv import fraclap_pv
from ..quadrature.rules import DEFAULT_CONFIG, QuadConfig
from ..specfun import FracParams
from .sequence import FunctionSequence

__all__ = [
    "extrapolate",
    "BEstimate",
    "estimate_b",
    "SandwichResult",
    "sandwich_check",
    "tail_profile",
    "ConstantSolutionResult",
    "constant_solution_check",
]


def extrapolate(values, h, exponents) -> tuple[float, float]:
    """Eliminate the terms ``h^e`` (``e`` in ``exponents``, in order) from ``values(h)``.

    With ``m = min(len(values) - 1, len(exponents))`` the last ``m + 1``
    samples are fitted exactly by ``L + sum_k a_k h^{e_k}`` over the first
    ``m`` exponents, which is exact on any grid. Returns ``L`` and its gap
    to the fit of one order lower on the last ``m`` samples, which serves
    as the convergence gap.
    """
    v = np.asarray(values, dtype=float)
    h = np.asarray(h, dtype=float)
    if v.shape != h.shape or v.ndim != 1 or v.size == 0:
        raise ValueError("need matching, nonempty value and step lists")
    exps = [float(e) for e in exponents]

    def fit(m):
        hv, tv = h[v.size - m - 1:], v[v.size - m - 1:]
        scale = np.max(np.abs(hv))
        A = np.column_stack([np.ones(m + 1)] + [(hv / scale) ** e for e in exps[:m]])
        return float(np.linalg.solve(A, tv)[0])

    m = min(v.size - 1, len(exps))
    best = fit(m)
    gap = abs(best - fit(m - 1)) if m > 0 else 0.0
    return best, gap


def _limit(values, grid, method, exponents, *, reciprocal=True):
    values = list(values)
    if method == "last":
        gap = abs(values[-1] - values[-2]) if len(values) > 1 else 0.0
        return values[-1], gap
    if method == "richardson":
        h = [1.0 / g for g in grid] if reciprocal else list(grid)
        return extrapolate(values, h, exponents)
    raise ValueError(f"unknown extrapolation {method!r}")


@dataclass
class BEstimate:
    """Result of the iterated-limit estimate.

    ``table[k, r, i]`` is ``F_i(x_k, R_r)``; ``i_limits[k, r]`` the
    extrapolation over the index; ``x_checks[k]`` the further
    extrapolation over ``R``. ``b`` is the value at ``x = 0``.
    """

    b: float
    table: np.ndarray
    errors: np.ndarray
    i_limits: np.ndarray
    x_checks: np.ndarray
    index_grid: list
    radius_grid: list
    x_samples: list
    index_method: str
    radius_method: str
    cauchy_gap: float
    radius_gap: float
    meta: dict = dc_field(default_factory=dict)

    @property
    def spread(self) -> float:
        """``max |x_check - b|``."""
        return float(np.max(np.abs(self.x_checks - self.b)))

    @property
    def relative_spread(self) -> float:
        return self.spread / abs(self.b) if self.b != 0.0 else float("inf") if self.spread else 0.0

    @property
    def nonnegative(self) -> bool:
        return bool(np.all(self.table >= -self.errors))

    @property
    def monotone_in_R(self) -> bool:
        """``F_i(x, R)`` non-increasing along the radius grid for every ``i`` and ``x``."""
        d = np.diff(self.table, axis=1)
        slack = self.errors[:, 1:, :] + self.errors[:, :-1, :]
        return bool(np.all(d <= slack))

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "x_checks": self.x_checks.tolist(),
            "spread": self.spread,
            "i_limits": self.i_limits.tolist(),
            "table": self.table.tolist(),
            "index_grid": list(self.index_grid),
            "radius_grid": list(self.radius_grid),
            "x_samples": [list(x) for x in self.x_samples],
            "index_method": self.index_method,
            "radius_method": self.radius_method,
            "cauchy_gap": self.cauchy_gap,
            "radius_gap": self.radius_gap,
            "nonnegative": self.nonnegative,
            "monotone_in_R": self.monotone_in_R,
            **self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self, x_index: int = 0) -> str:
        """The ``F(x, R)`` table at one sample point: rows ``R``, columns ``i``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R"] + [f"i={i:g}" for i in self.index_grid])
        for r, R in enumerate(self.radius_grid):
            w.writerow([repr(float(R))] + [repr(float(v)) for v in self.table[x_index, r]])
        return buf.getvalue()


def _increasing(grid, what):
    g = [float(v) for v in grid]
    if not g or any(b <= a for a, b in zip(g, g[1:])):
        raise ValueError(f"{what} must be nonempty and strictly increasing")
    return g


def estimate_b(seq: FunctionSequence, index_grid, radius_grid, x_samples, params: FracParams,
               cfg: QuadConfig = DEFAULT_CONFIG, *, index_method: str = "last",
               radius_method: str = "last", index_exponents=(1.0, 2.0, 3.0, 4.0),
               radius_exponents=None, gate_tol: float = 1e-2) -> BEstimate:
    """Estimate ``b = lim_R lim_i F_i(x, R)``, the limit over ``i`` taken first.

    ``index_method`` and ``radius_method`` are ``"last"`` (the value at
    the largest grid entry) or ``"richardson"`` (elimination of powers of
    ``1/i`` or ``1/R``; the radius exponents default to ``2s, 2s + 2, ...``).
    The origin is always included among the sample points.

    Raises
    ------
    NonConvergent
        on the largest radius the index extrapolation at ``x = 0`` moves by
        more than ``gate_tol * max(1, |value|)`` between its last two estimates.
    """
    idx = _increasing(index_grid, "index_grid")
    rad = _increasing(radius_grid, "radius_grid")
    n = params.n
    xs = [np.atleast_1d(np.asarray(x, dtype=float)).reshape(n) for x in x_samples]
    if not any(not np.any(x) for x in xs):
        xs = [np.zeros(n)] + xs
    else:
        xs = sorted(xs, key=lambda x: bool(np.any(x)))
    for x in xs:
        if not np.linalg.norm(x) < rad[0] / 2.0:
            raise ValueError(f"sample {x.tolist()} must satisfy |x| < min(R)/2")
    if radius_exponents is None:
        s2 = 2.0 * params.sigma
        radius_exponents = tuple(s2 + 2.0 * k for k in range(len(rad)))

    table = np.zeros((len(xs), len(rad), len(idx)))
    errs = np.zeros_like(table)
    for c, i in enumerate(idx):
        f = seq.member(i)
        for k, x in enumerate(xs):
            for r, R in enumerate(rad):
                table[k, r, c], errs[k, r, c] = tail_integral(f, x, R, params, cfg)

    i_lim = np.zeros((len(xs), len(rad)))
    gaps = np.zeros_like(i_lim)
    for k in range(len(xs)):
        for r in range(len(rad)):
            i_lim[k, r], gaps[k, r] = _limit(table[k, r], idx, index_method, index_exponents)
    cauchy = float(gaps[0, -1])
    if cauchy > gate_tol * max(1.0, abs(i_lim[0, -1])):
        raise NonConvergent(
            f"index limit at R = {rad[-1]:g} moved by {cauchy:.3e} (gate {gate_tol:g})"
        )
    x_checks = np.zeros(len(xs))
    rgaps = np.zeros(len(xs))
    for k in range(len(xs)):
        x_checks[k], rgaps[k] = _limit(i_lim[k], rad, radius_method, radius_exponents)
    return BEstimate(
        b=float(x_checks[0]), table=table, errors=errs, i_limits=i_lim, x_checks=x_checks,
        index_grid=idx, radius_grid=rad, x_samples=[tuple(x.tolist()) for x in xs],
        index_method=index_method, radius_method=radius_method, cauchy_gap=cauchy,
        radius_gap=float(rgaps[0]),
    )


@dataclass(frozen=True)
class SandwichResult:
    passed: bool
    lower_margin: float
    upper_margin: float
    F_origin: float
    F_x: float
    lower_bound: float
    upper_bound: float

    def __bool__(self) -> bool:
        return self.passed


def sandwich_check(seq: FunctionSequence, i, x, R: float, params: FracParams,
                   cfg: QuadConfig = DEFAULT_CONFIG) -> SandwichResult:
    """Check ``(R/(R+|x|))^m F_i(0,R) <= F_i(x,R) <= (R/(R-|x|))^m F_i(0,R)``, ``m = n + 2s``.

    A margin counts as nonnegative when it exceeds minus the combined
    quadrature error estimate.

    Raises
    ------
    PointOutsideBall
        ``|x| >= R``.
    """
    n = params.n
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(n)
    r = float(np.linalg.norm(x))
    if not r < R:
        raise PointOutsideBall(f"|x| = {r:.6g} must be smaller than R = {R}")
    f = seq.member(i)
    F0, e0 = tail_integral(f, np.zeros(n), R, params, cfg)
    if r == 0.0:
        Fx, ex = F0, 0.0
    else:
        Fx, ex = tail_integral(f, x, R, params, cfg)
    m = params.kernel_power
    lo = (R / (R + r)) ** m * F0
    hi = (R / (R - r)) ** m * F0
    lm, um = Fx - lo, hi - Fx
    slack = e0 + ex
    return SandwichResult(lm >= -slack and um >= -slack, lm, um, F0, Fx, lo, hi)


def tail_profile(field: ScalarField, x, radii, params: FracParams,
                 cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, bool]:
    """``F(x, R)`` along ``radii`` and whether it is non-increasing (within error estimates)."""
    rad = _increasing(radii, "radii")
    vals, errs = zip(*(tail_integral(field, x, R, params, cfg) for R in rad))
    vals, errs = np.array(vals), np.array(errs)
    ok = bool(np.all(np.diff(vals) <= errs[1:] + errs[:-1]))
    return vals, ok


@dataclass(frozen=True)
class ConstantSolutionResult:
    passed: bool
    constant: float
    operator_value: float
    lhs: float
    rhs: float

    def __bool__(self) -> bool:
        return self.passed


def constant_solution_check(b: float, p: float, params: FracParams,
                            cfg: QuadConfig = DEFAULT_CONFIG, x=None) -> ConstantSolutionResult:
    """Check that the constant ``u = b^{1/p}`` solves ``(-Delta)^s u - b = -u^p``.

    Evaluates the operator on the constant field ``b^{1/p}`` (must vanish
    within ``abs_tol``) and checks ``0 - b == -(b^{1/p})^p`` to a few ulps.
    """
    if p == 0:
        raise ValueError("p = 0 is excluded")
    b = float(b)
    if not b > 0.0:
        raise ValueError("b must be positive")
    const = b ** (1.0 / p)
    x = np.zeros(params.n) if x is None else x
    val, _ = fraclap_pv(ScalarField.constant(params.n, const), x, params, cfg)
    lhs = val - b
    rhs = -(const ** p)
    ok = abs(val) <= cfg.abs_tol and abs(lhs - rhs) <= 8.0 * np.finfo(float).eps * max(1.0, b)
    return ConstantSolutionResult(bool(ok), const, val, lhs, rhs)
